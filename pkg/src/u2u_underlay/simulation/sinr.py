"""Per-drop SINR at the typical U2U receiver and at the typical BS."""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from ..scenario.params import ScenarioParams, Victim, noise_power_w
from ..utils.units import watts_to_dbm
from .realization import LinkSet, NetworkRealization, ServingLink, zeta_by_condition

RECORD_DUMP_COLUMNS = [
    "drop_idx",
    "victim",
    "useful_dbm",
    "i_gue_dbm",
    "i_uav_dbm",
    "noise_dbm",
    "serving_los",
]


@dataclass(frozen=True)
class SinrRecord:
    """Received powers (W) at one victim in one drop."""

    victim: Victim
    useful_w: float
    i_gue_w: float
    i_uav_w: float
    noise_w: float
    serving_los: bool
    tx_power_w: float = float("nan")
    drop_idx: int = 0

    def __post_init__(self) -> None:
        for name in ("useful_w", "i_gue_w", "i_uav_w", "noise_w"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def interference_w(self) -> float:
        return self.i_gue_w + self.i_uav_w

    @property
    def sinr(self) -> float:
        return self.useful_w / (self.interference_w + self.noise_w)


def _received(links: LinkSet, params: ScenarioParams) -> float:
    if len(links) == 0:
        return 0.0
    zeta = zeta_by_condition(links.link_type, links.r_2d, links.los, params)
    return float(np.sum(links.power * links.fading / zeta))


def _useful(link: ServingLink, params: ScenarioParams) -> float:
    zeta = zeta_by_condition(link.link_type, np.array([link.r_2d]), np.array([link.los]), params)
    return float(link.power * link.fading / zeta[0])


def sinr_u2u(real: NetworkRealization, params: ScenarioParams) -> SinrRecord:
    """SINR of the typical U2U link; all antennas omnidirectional."""
    return SinrRecord(
        victim=Victim.UAV,
        useful_w=_useful(real.u2u_pair, params),
        i_gue_w=_received(real.gue_at_uav, params),
        i_uav_w=_received(real.uav_at_uav, params),
        noise_w=noise_power_w(params),
        serving_los=real.u2u_pair.los,
        tx_power_w=real.u2u_pair.power,
        drop_idx=real.drop_idx,
    )


def sinr_gue_ul(real: NetworkRealization, params: ScenarioParams) -> SinrRecord:
    """SINR of the typical GUE uplink, every path weighted by the BS pattern."""
    return SinrRecord(
        victim=Victim.BS,
        useful_w=_useful(real.gue_serving, params),
        i_gue_w=_received(real.gue_at_bs, params),
        i_uav_w=_received(real.uav_at_bs, params),
        noise_w=noise_power_w(params),
        serving_los=real.gue_serving.los,
        tx_power_w=real.gue_serving.power,
        drop_idx=real.drop_idx,
    )


@dataclass
class RecordSet:
    """Columnar store of SINR records, merged in drop order."""

    drop_idx: NDArray[np.int64] = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    victim: NDArray[np.str_] = field(default_factory=lambda: np.zeros(0, dtype="<U1"))
    useful_w: NDArray[np.float64] = field(default_factory=lambda: np.zeros(0))
    i_gue_w: NDArray[np.float64] = field(default_factory=lambda: np.zeros(0))
    i_uav_w: NDArray[np.float64] = field(default_factory=lambda: np.zeros(0))
    noise_w: NDArray[np.float64] = field(default_factory=lambda: np.zeros(0))
    serving_los: NDArray[np.bool_] = field(default_factory=lambda: np.zeros(0, dtype=bool))
    tx_power_w: NDArray[np.float64] = field(default_factory=lambda: np.zeros(0))

    _COLUMNS = (
        "drop_idx",
        "victim",
        "useful_w",
        "i_gue_w",
        "i_uav_w",
        "noise_w",
        "serving_los",
        "tx_power_w",
    )

    def __len__(self) -> int:
        return int(self.drop_idx.size)

    @classmethod
    def from_records(cls, records: list[SinrRecord]) -> "RecordSet":
        return cls(
            drop_idx=np.array([r.drop_idx for r in records], dtype=np.int64),
            victim=np.array([str(r.victim) for r in records], dtype="<U1"),
            useful_w=np.array([r.useful_w for r in records], dtype=float),
            i_gue_w=np.array([r.i_gue_w for r in records], dtype=float),
            i_uav_w=np.array([r.i_uav_w for r in records], dtype=float),
            noise_w=np.array([r.noise_w for r in records], dtype=float),
            serving_los=np.array([r.serving_los for r in records], dtype=bool),
            tx_power_w=np.array([r.tx_power_w for r in records], dtype=float),
        )

    @classmethod
    def concat(cls, parts: list["RecordSet"]) -> "RecordSet":
        if not parts:
            return cls()
        return cls(**{c: np.concatenate([getattr(p, c) for p in parts]) for c in cls._COLUMNS})

    def select(self, mask: NDArray[np.bool_]) -> "RecordSet":
        return RecordSet(**{c: getattr(self, c)[mask] for c in self._COLUMNS})

    def for_victim(self, victim: Victim) -> "RecordSet":
        return self.select(self.victim == str(Victim(victim)))

    def records(self) -> list[SinrRecord]:
        return [
            SinrRecord(
                victim=Victim(str(self.victim[i])),
                useful_w=float(self.useful_w[i]),
                i_gue_w=float(self.i_gue_w[i]),
                i_uav_w=float(self.i_uav_w[i]),
                noise_w=float(self.noise_w[i]),
                serving_los=bool(self.serving_los[i]),
                tx_power_w=float(self.tx_power_w[i]),
                drop_idx=int(self.drop_idx[i]),
            )
            for i in range(len(self))
        ]

    @property
    def victims(self) -> set[str]:
        return {str(v) for v in np.unique(self.victim)}

    @property
    def sinr(self) -> NDArray[np.float64]:
        return self.useful_w / (self.i_gue_w + self.i_uav_w + self.noise_w)

    def to_frame(self) -> pd.DataFrame:
        """Raw record dump in dBm; absent components read −inf."""
        return pd.DataFrame(
            {
                "drop_idx": self.drop_idx,
                "victim": self.victim,
                "useful_dbm": watts_to_dbm(self.useful_w),
                "i_gue_dbm": watts_to_dbm(self.i_gue_w),
                "i_uav_dbm": watts_to_dbm(self.i_uav_w),
                "noise_dbm": watts_to_dbm(self.noise_w),
                "serving_los": self.serving_los,
            },
            columns=RECORD_DUMP_COLUMNS,
        )

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path
