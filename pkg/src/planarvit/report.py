"""Per-edge vitality report shared by the pipeline, the bridge route and the oracle."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PROV_SLICE = 0
PROV_U = 1
PROV_BRIDGE = 2
PROV_SELF_LOOP = 3
PROV_ORACLE = 4

PROVENANCE_NAMES = {
    PROV_SLICE: "slice",
    PROV_U: "U",
    PROV_BRIDGE: "bridge",
    PROV_SELF_LOOP: "self-loop",
    PROV_ORACLE: "oracle",
}


@dataclass
class VitalityReport:
    """Max-flow value plus a 0/1 vitality and a provenance code per primal edge.

    ``slice_of`` holds, for slice-tested edges, the index of the slice whose
    test decided the verdict (or -1).
    """

    mf: int
    vit: np.ndarray
    provenance: np.ndarray
    slice_of: np.ndarray | None = None
    timings: dict[str, float] = field(default_factory=dict)
    stats: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.vit = np.asarray(self.vit, dtype=np.int8)
        self.provenance = np.asarray(self.provenance, dtype=np.int8)
        if len(self.vit) and not np.all((self.vit == 0) | (self.vit == 1)):
            raise ValueError("vitality values must be 0 or 1")

    @property
    def m(self) -> int:
        return len(self.vit)

    def provenance_name(self, e: int) -> str:
        return PROVENANCE_NAMES[int(self.provenance[e])]

    def as_dict(self, edges: list[tuple[int, int]] | None = None) -> dict:
        out = {
            "mf": int(self.mf),
            "edges": [],
            "stats": {k: int(v) for k, v in self.stats.items()},
            "timings": {k: float(v) for k, v in self.timings.items()},
        }
        for e in range(self.m):
            rec = {"id": e, "vit": int(self.vit[e]), "provenance": self.provenance_name(e)}
            if edges is not None:
                rec["u"], rec["v"] = edges[e]
            out["edges"].append(rec)
        return out
