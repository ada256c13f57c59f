// Tiny DOM construction helper; no framework, plain elements.
export function el(tag, attrs = {}, ...children) {
    const node = document.createElement(tag);
    for (const [key, value] of Object.entries(attrs)) {
        if (typeof value === "function") {
            node.addEventListener(key.replace(/^on/, ""), value);
        }
        else if (key === "className") {
            node.className = value;
        }
        else {
            node.setAttribute(key, value);
        }
    }
    for (const child of children) {
        if (child == null)
            continue;
        node.append(child instanceof Node ? child : document.createTextNode(child));
    }
    return node;
}
export function clear(node) {
    while (node.firstChild)
        node.removeChild(node.firstChild);
    return node;
}
