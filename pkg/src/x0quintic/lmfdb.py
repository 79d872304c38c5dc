"""Client for the LMFDB API backed by an append-only offline snapshot.

Every query has a stable key.  In offline mode the snapshot is the only
source; online, misses are fetched over HTTP (sequentially, with a fixed
politeness delay) and appended to the snapshot.
"""

from __future__ import annotations

import json
import logging
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Any

from .arith import divisors
from .elliptic import EllipticCurveRecord

__all__ = [
    "NewformFactor",
    "SnapshotRecord",
    "Snapshot",
    "DataUnavailable",
    "NetworkUnavailable",
    "SnapshotMiss",
    "LmfdbClient",
    "default_client",
    "multiplicity",
    "API_ROOT",
]

log = logging.getLogger(__name__)

API_ROOT = "https://www.lmfdb.org/api"
MAX_ORBIT_LEVEL = 200  # bundled Galois-orbit data covers every level up to this


class DataUnavailable(RuntimeError):
    """Base class for missing external data."""


class NetworkUnavailable(DataUnavailable):
    pass


class SnapshotMiss(DataUnavailable):
    pass


@dataclass(frozen=True)
class NewformFactor:
    label: str
    level: int
    dimension: int
    analytic_rank: int
    atkin_lehner: tuple[tuple[int, int], ...] = ()
    fricke: int = 0

    def __post_init__(self):
        if self.level < 1 or self.dimension < 1:
            raise ValueError(f"bad newform factor {self.label}")

    def al_sign(self, q: int) -> int:
        return dict(self.atkin_lehner)[q]


@dataclass(frozen=True)
class SnapshotRecord:
    query_key: str
    url: str
    fetched_at: str
    payload: Any
    source: str = ""

    def to_json(self) -> dict:
        return {
            "query_key": self.query_key,
            "url": self.url,
            "fetched_at": self.fetched_at,
            "payload": self.payload,
            "source": self.source,
        }


class Snapshot:
    """Append-only store of query records."""

    def __init__(self, records: list[SnapshotRecord] | None = None, path: Path | None = None):
        self._records: dict[str, SnapshotRecord] = {}
        self.path = path
        for r in records or []:
            self.add(r)

    @classmethod
    def load(cls, path: str | Path | None = None) -> "Snapshot":
        if path is None:
            text = resources.files("x0quintic.data").joinpath("snapshot.json").read_text()
        else:
            text = Path(path).read_text()
        raw = json.loads(text)
        recs = [
            SnapshotRecord(r["query_key"], r["url"], r["fetched_at"], r["payload"], r.get("source", ""))
            for r in raw["records"]
        ]
        return cls(recs, Path(path) if path else None)

    def __contains__(self, key: str) -> bool:
        return key in self._records

    def __len__(self) -> int:
        return len(self._records)

    def keys(self) -> list[str]:
        return list(self._records)

    def get(self, key: str) -> SnapshotRecord:
        try:
            return self._records[key]
        except KeyError:
            raise SnapshotMiss(key) from None

    def add(self, rec: SnapshotRecord) -> None:
        old = self._records.get(rec.query_key)
        if old is not None and old.payload != rec.payload:
            raise ValueError(f"snapshot is append-only; {rec.query_key} already present with other data")
        if old is None:
            self._records[rec.query_key] = rec

    def dumps(self) -> str:
        recs = [self._records[k].to_json() for k in self._records]
        return json.dumps({"schema": 1, "records": recs}, sort_keys=True, separators=(",", ":")) + "\n"

    def save(self, path: str | Path | None = None) -> None:
        target = Path(path or self.path)
        target.write_text(self.dumps())


def multiplicity(N: int, factor: NewformFactor) -> int:
    """Number of copies of the factor in J_0(N): the number of divisors of N/level."""
    if N % factor.level:
        raise ValueError(f"level {factor.level} does not divide {N}")
    return len(divisors(N // factor.level))


def _factor_from_row(row: dict) -> NewformFactor:
    al = row.get("atkin_lehner", row.get("atkin_lehner_eigenvals")) or []
    return NewformFactor(
        label=row["label"],
        level=int(row["level"]),
        dimension=int(row["dim"]),
        analytic_rank=int(row["analytic_rank"]),
        atkin_lehner=tuple((int(q), int(s)) for q, s in al),
        fricke=int(row.get("fricke_eigenval", 0)),
    )


def _curve_from_row(row: dict, source: str) -> EllipticCurveRecord:
    label = row.get("label", row.get("lmfdb_label"))
    iso = row.get("lmfdb_iso", label.rstrip("0123456789"))
    return EllipticCurveRecord(
        label=label,
        conductor=int(row["conductor"]),
        ainvs=tuple(int(a) for a in row["ainvs"]),
        rank=int(row["rank"]),
        modular_degree=int(row["degree"]),
        optimal=int(row.get("optimality", 0)) == 1,
        newform=row.get("newform", iso.replace(".", ".2.a.")),
        provenance=source,
    )


class LmfdbClient:
    """Query layer; offline mode never touches the network."""

    def __init__(
        self,
        snapshot: Snapshot | None = None,
        offline: bool = True,
        delay: float = 1.0,
        timeout: float = 30.0,
    ):
        self.snapshot = snapshot if snapshot is not None else Snapshot.load()
        self.offline = offline
        self.delay = delay
        self.timeout = timeout
        self._last = 0.0

    # -- transport -------------------------------------------------------

    def _http_json(self, url: str) -> Any:
        wait = self.delay - (time.monotonic() - self._last)
        if wait > 0:
            time.sleep(wait)
        self._last = time.monotonic()
        try:
            with urllib.request.urlopen(url, timeout=self.timeout) as resp:
                return json.load(resp)
        except (urllib.error.URLError, OSError) as exc:
            raise NetworkUnavailable(f"{url}: {exc}") from exc

    def _fetch_all(self, url: str) -> list[dict]:
        rows: list[dict] = []
        offset = 0
        while True:
            page = self._http_json(f"{url}&_offset={offset}")
            data = page.get("data", [])
            rows.extend(data)
            if not page.get("next") or not data:
                return rows
            offset += len(data)

    def query(self, key: str, url: str, normalise=None) -> Any:
        if key in self.snapshot:
            return self.snapshot.get(key).payload
        if self.offline:
            raise SnapshotMiss(f"{key} is not in the snapshot (offline mode)")
        try:
            rows = self._fetch_all(url)
        except NetworkUnavailable:
            log.warning("network unavailable for %s; snapshot has no fallback", key)
            raise
        payload = normalise(rows) if normalise else rows
        stamp = datetime.now(timezone.utc).replace(microsecond=0).isoformat()
        self.snapshot.add(SnapshotRecord(key, url, stamp, payload, "lmfdb"))
        return payload

    # -- newforms --------------------------------------------------------

    def newforms_at_level(self, M: int) -> list[NewformFactor]:
        url = (
            f"{API_ROOT}/mf_newforms/?level={M}&weight=2&char_order=1&_format=json"
            "&_fields=label,level,dim,analytic_rank,atkin_lehner_eigenvals,fricke_eigenval"
        )
        rows = self.query(f"mf_newforms:level={M}", url, _normalise_newforms)
        return [_factor_from_row(r) for r in rows]

    def fetch_newform_factors(self, N: int) -> list[NewformFactor]:
        """Galois orbits of weight-2 trivial-character newforms of level dividing N."""
        out = []
        for M in divisors(N):
            out.extend(self.newforms_at_level(M))
        return out

    def qexp(self, label: str) -> list[int]:
        url = f"{API_ROOT}/mf_newforms/?label={label}&_fields=traces&_format=json"
        return list(self.query(f"mf_newforms:{label}:qexp", url, lambda rows: rows[0]["traces"][:20]))

    # -- elliptic curves ---------------------------------------------------

    def curves_with_conductor(self, M: int, positive_rank: bool = False) -> list[EllipticCurveRecord]:
        suffix = ":rank>0" if positive_rank else ""
        url = f"{API_ROOT}/ec_curvedata/?conductor={M}&_format=json"
        if positive_rank:
            url += "&rank=gt0"
        key = f"ec_curvedata:conductor={M}{suffix}"
        if key not in self.snapshot and positive_rank and f"ec_curvedata:conductor={M}" in self.snapshot:
            return [E for E in self.curves_with_conductor(M) if E.rank > 0]
        rows = self.query(key, url, _normalise_curves)
        rec_source = self.snapshot.get(key).url
        return [_curve_from_row(r, rec_source) for r in rows]

    def positive_rank_elliptic_with_conductor_dividing(self, N: int) -> list[EllipticCurveRecord]:
        """The optimal curve of every positive-rank isogeny class of conductor dividing N."""
        out = []
        for M in divisors(N):
            if M < 11:
                continue
            out.extend(E for E in self.curves_with_conductor(M, positive_rank=True) if E.optimal)
        return out

    def modular_degree_five_curves(self) -> list[EllipticCurveRecord]:
        key = "ec_curvedata:degree=5"
        url = f"{API_ROOT}/ec_curvedata/?degree=5&_format=json"
        rows = self.query(key, url, _normalise_curves)
        return [_curve_from_row(r, url) for r in rows]


def _normalise_newforms(rows: list[dict]) -> list[dict]:
    out = []
    for r in rows:
        out.append(
            {
                "label": r["label"],
                "level": r["level"],
                "dim": r["dim"],
                "analytic_rank": r["analytic_rank"],
                "atkin_lehner": r.get("atkin_lehner_eigenvals") or [],
                "fricke_eigenval": r.get("fricke_eigenval", 0),
            }
        )
    return sorted(out, key=lambda r: r["label"])


def _normalise_curves(rows: list[dict]) -> list[dict]:
    out = []
    for r in rows:
        out.append(
            {
                "label": r["lmfdb_label"],
                "lmfdb_iso": r["lmfdb_iso"],
                "conductor": r["conductor"],
                "ainvs": [int(a) for a in r["ainvs"]],
                "rank": r["rank"],
                "degree": r["degree"],
                "optimality": r.get("optimality", 0),
            }
        )
    return sorted(out, key=lambda r: r["label"])


_default: LmfdbClient | None = None


def default_client() -> LmfdbClient:
    """Shared offline client over the bundled snapshot."""
    global _default
    if _default is None:
        _default = LmfdbClient(offline=True)
    return _default


def set_default_client(client: LmfdbClient) -> None:
    global _default
    _default = client
