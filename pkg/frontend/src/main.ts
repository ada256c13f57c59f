import { Workbench } from "./app.js";

const mount = document.getElementById("app");
if (mount) {
  const workbench = new Workbench(mount);
  void workbench.start();
}
