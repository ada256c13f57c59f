"""Shared fixture builders: the two published case-study scenarios.

Case study 1 moves a stock-trading web system onto a private PaaS as a
whole-stack (type V) migration; case study 2 moves a document-processing
system to a public cloud converting its database (type IV), including the
tactic-driven refinement loop. Node ids are bound to names here once so the
tests read like the narrative.
"""

from dataclasses import dataclass
from typing import Dict

from cloudgate import (GoalModel, GoalPattern, IntroducedSpec, MigrationType,
                       Origin, Session, assess, new_model, start_session)
from cloudgate.risk import Consequence as C
from cloudgate.risk import Likelihood as L
from cloudgate.risk import RiskLevel as R

ACHIEVE = GoalPattern.ACHIEVE

CS1_TACTICS = {
    "O51": ("T7", "mediator with synchronised interaction between decoupled "
                  "components"),
    "O50": ("T6", "adaptor emulating MySQL and MongoDB operations"),
    "O21": ("T12", "mapping table converting incompatible data types"),
    "O3": [("T18", "partition and replicate components over multiple servers"),
           ("T23", "retry policy with a delay before the next attempt")],
}


def build_cs1_model(repo, with_tactics: bool = False) -> GoalModel:
    model = new_model("SpringTrader", MigrationType.V, repo)
    g_scal = model.add_goal(ACHIEVE, "Increased scalability", "G2")
    g_inter = model.add_goal(ACHIEVE, "Keeping system interoperable", "G6")
    g_avail = model.add_goal(ACHIEVE, "Keeping system available", "G1")
    model.attach_obstacle(g_scal, Origin.evidential("O51"))
    model.attach_obstacle(g_inter, Origin.evidential("O50"))
    model.attach_obstacle(g_inter, Origin.evidential("O21"))
    model.attach_obstacle(g_avail, Origin.evidential("O3"))
    assess(model, "O51", L.ALMOST_CERTAIN, C.MAJOR,
           "tight dependencies to meta-libraries")
    assess(model, "O50", L.ALMOST_CERTAIN, C.MAJOR,
           "SQL statements incompatible with MongoDB/MySQL")
    assess(model, "O21", L.ALMOST_CERTAIN, C.MAJOR,
           "data types incompatible with MySQL and MongoDB")
    # the matrix computes M for (possible, minor); the published table prints
    # L, reproduced through a documented override
    assess(model, "O3", L.POSSIBLE, C.MINOR,
           "transient faults calling the quote web-service; published risk "
           "table prints L for this obstacle", override=R.LOW)
    if with_tactics:
        for node, tactics in CS1_TACTICS.items():
            if isinstance(tactics, tuple):
                tactics = [tactics]
            for tid, note in tactics:
                model.attach_tactic(node, tid, note)
    return model


def build_cs1_session(repo, session_id="cs1", clock=None,
                      with_tactics: bool = True) -> Session:
    session = start_session("SpringTrader", MigrationType.V, repo,
                            session_id=session_id, clock=clock)
    g_scal = session.add_goal(ACHIEVE, "Increased scalability", "G2")
    g_inter = session.add_goal(ACHIEVE, "Keeping system interoperable", "G6")
    g_avail = session.add_goal(ACHIEVE, "Keeping system available", "G1")
    session.attach_obstacle(g_scal, Origin.evidential("O51"))
    session.attach_obstacle(g_inter, Origin.evidential("O50"))
    session.attach_obstacle(g_inter, Origin.evidential("O21"))
    session.attach_obstacle(g_avail, Origin.evidential("O3"))
    session.assess("O51", L.ALMOST_CERTAIN, C.MAJOR,
                   "tight dependencies to meta-libraries")
    session.assess("O50", L.ALMOST_CERTAIN, C.MAJOR,
                   "SQL statements incompatible with MongoDB/MySQL")
    session.assess("O21", L.ALMOST_CERTAIN, C.MAJOR,
                   "data types incompatible with MySQL and MongoDB")
    session.assess("O3", L.POSSIBLE, C.MINOR,
                   "transient faults; published risk table prints L",
                   override=R.LOW)
    if with_tactics:
        for node, tactics in CS1_TACTICS.items():
            if isinstance(tactics, tuple):
                tactics = [tactics]
            for tid, note in tactics:
                session.attach_tactic(node, tid, note)
    return session


@dataclass
class CaseStudy2:
    session: Session
    nodes: Dict[str, str]
    t3_node: str


def build_cs2_session(repo, session_id="cs2", clock=None) -> CaseStudy2:
    s = start_session("DDP", MigrationType.IV, repo, session_id=session_id,
                      clock=clock)
    nodes: Dict[str, str] = {}
    nodes["g_cost"] = s.add_goal(ACHIEVE, "Reduced cloud adoption cost", "G10")
    nodes["g_perf"] = s.add_goal(ACHIEVE, "Improved performance", "G4")
    nodes["g_test"] = s.add_goal(ACHIEVE, "Improved testability", "G8")
    nodes["g_port"] = s.add_goal(ACHIEVE, "Improved portability", "G7")

    # step 2.1, first pass
    nodes["O33"] = s.attach_obstacle(nodes["g_cost"], Origin.evidential("O33"))
    nodes["O48"] = s.attach_obstacle(nodes["g_cost"], Origin.evidential("O48"))
    nodes["O27"] = s.attach_obstacle(nodes["g_perf"], Origin.evidential("O27"),
                                     "Performance variability of cloud servers")
    nodes["O43"] = s.attach_obstacle(nodes["g_perf"], Origin.evidential("O43"),
                                     "High-time for session handling")
    nodes["O29"] = s.attach_obstacle(nodes["g_perf"], Origin.evidential("O29"))
    nodes["O46"] = s.attach_obstacle(nodes["g_perf"], Origin.evidential("O46"))
    nodes["O42"] = s.attach_obstacle(
        nodes["g_port"], Origin.evidential("O42"),
        "Switch between regular file system API to Microsoft Azure Storage API")

    # step 2.2, first pass
    s.assess(nodes["O27"], L.LIKELY, C.MAJOR, "cloud server workload variability")
    s.assess(nodes["O43"], L.LIKELY, C.MODERATE, "session state dependency")
    s.assess(nodes["O29"], L.LIKELY, C.MODERATE, "middleware layering")
    s.assess(nodes["O46"], L.LIKELY, C.MODERATE, "on-premise browser latency")
    s.assess(nodes["O48"], L.ALMOST_CERTAIN, C.MAJOR,
             "early investigation of public cloud platforms")
    s.assess(nodes["O33"], L.ALMOST_CERTAIN, C.MAJOR, "technical documents of DDP")
    s.assess(nodes["O42"], L.LIKELY, C.MODERATE, "file system API switch")

    # step 2.3: substituting the cloud service re-rates the incompatibility
    # and raises two new obstacles, re-entering step 2.1
    created = s.apply_tactic(
        nodes["O48"], "T3",
        "choose Microsoft Azure over AWS and Google App Engine",
        reassessment=(L.POSSIBLE, C.MAJOR,
                      "platform choice drops incompatibility likelihood from "
                      "almost-certain to possible"),
        introduced=[IntroducedSpec(Origin.evidential("O44")),
                    IntroducedSpec(Origin.evidential("O49"))])
    t3_node = created[0]
    nodes["O44"], nodes["O49"] = created[1], created[2]
    s.apply_tactic(nodes["O33"], "T36",
                   "extend the project deadline from 90 to 120 days")

    # step 2.1 re-entry: refine the introduced and platform-specific obstacles
    nodes["O21"] = s.attach_obstacle(nodes["O49"], Origin.evidential("O21"),
                                     "Incompatible datatypes")
    nodes["O50"] = s.attach_obstacle(nodes["O49"], Origin.evidential("O50"),
                                     "Incompatible data operations")
    s.rename_obstacle(nodes["O29"], "Microsoft Azure middleware latency")
    nodes["O29_1"] = s.attach_obstacle(
        nodes["O29"], Origin.domain(), "Microsoft Azure database middleware latency")
    nodes["O29_2"] = s.attach_obstacle(
        nodes["O29"], Origin.domain(), "Microsoft Azure message middleware latency")
    nodes["O29_3"] = s.attach_obstacle(
        nodes["O29"], Origin.domain(),
        "Microsoft Azure transaction middleware latency")
    nodes["O47"] = s.attach_obstacle(nodes["g_perf"], Origin.evidential("O47"))
    nodes["O47_1"] = s.attach_obstacle(nodes["O47"], Origin.domain(),
                                       "On-premise hardware latency")
    nodes["O28"] = s.attach_obstacle(nodes["O47"], Origin.evidential("O28"),
                                     "Distance from Microsoft Azure servers")

    # step 2.2 re-entry
    s.assess(nodes["O44"], L.LIKELY, C.MODERATE, "API mismatch with Azure")
    s.assess(nodes["O21"], L.ALMOST_CERTAIN, C.MODERATE,
             "SQL Server data types vs Azure database")
    s.assess(nodes["O50"], L.ALMOST_CERTAIN, C.MODERATE,
             "stored procedures unsupported on Azure")
    for key in ("O29_1", "O29_2", "O29_3"):
        s.assess(nodes[key], L.LIKELY, C.MODERATE, "Azure middleware latency")
    s.assess(nodes["O28"], L.LIKELY, C.MODERATE, "distance to Azure servers")
    s.assess(nodes["O47_1"], L.POSSIBLE, C.INSIGNIFICANT,
             "local hardware latency")

    # step 2.3 re-entry
    s.attach_tactic(nodes["O44"], "T6",
                    "wrapper hiding Azure API mismatches")
    s.attach_tactic(nodes["O21"], "T12",
                    "convert legacy data types to Azure SQL")
    s.attach_tactic(nodes["O50"], "T6",
                    "emulator performing unsupported stored procedures")
    s.attach_tactic(nodes["O42"], "T7",
                    "decouple components behind a mediator")
    s.attach_tactic(nodes["O43"], "T29", "store session state externally")
    s.attach_tactic(nodes["O29"], "T24", "Azure servers close to North Europe")
    for key in ("O29_1", "O29_2", "O29_3"):
        s.attach_tactic(nodes[key], "T24", "Azure servers close to North Europe")
    s.attach_tactic(nodes["O27"], "T36",
                    "allow processing up to 2 hours for documents over 40 "
                    "megabytes in peak time")
    s.attach_tactic(nodes["O27"], "T26", "rent three more virtual machines")
    s.attach_tactic(nodes["O46"], "T21", "update consumer browsers regularly")
    s.attach_tactic(nodes["O28"], "T24",
                    "deploy components in North Europe close to Sweden")
    s.attach_tactic(nodes["O47_1"], "T41",
                    "This obstacle is not perceived critical")
    return CaseStudy2(session=s, nodes=nodes, t3_node=t3_node)


def build_fig4_model(repo) -> GoalModel:
    """Three root goals with the obstacle families of the running example."""
    model = new_model("S3 move", MigrationType.V, repo)
    model.add_goal(ACHIEVE, "Reduced IT cost", "G10")
    g_perf = model.add_goal(ACHIEVE, "Improved performance", "G4")
    g_avail = model.add_goal(ACHIEVE, "Improved availability", "G1")
    o27 = model.attach_obstacle(g_perf, Origin.evidential("O27"),
                                "Performance variability of Amazon S3")
    model.attach_obstacle(o27, Origin.domain(),
                          "High uploading time for blobs datatype (100k entries)")
    model.attach_obstacle(o27, Origin.domain(), "Low throughput to write buckets")
    model.attach_obstacle(g_perf, Origin.evidential("O28"))
    model.attach_obstacle(g_avail, Origin.evidential("O3"))
    o1 = model.attach_obstacle(g_avail, Origin.evidential("O1"))
    model.attach_obstacle(o1, Origin.domain(), "Local network disruption")
    model.attach_obstacle(o1, Origin.domain(), "I/O issues of servers")
    model.attach_obstacle(o1, Origin.domain(), "S3 data centre outage")
    return model
