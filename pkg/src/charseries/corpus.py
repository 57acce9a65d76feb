"""Bundled presentation corpus: loading, checksums, fingerprints."""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .pcgroup import PcPresentation, enumerate_elements, parse_presentation, is_consistent
from .series import center, exponent_p_central, lower_central

MANIFEST = "manifest.json"


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class CorpusEntry:
    group_id: str
    path: Path
    checksum: str
    p: int
    n: int

    @property
    def order(self) -> int:
        return self.p**self.n

    def load(self, verify: bool = True) -> PcPresentation:
        data = self.path.read_bytes()
        if verify and sha256(data) != self.checksum:
            raise CorpusError(f"checksum mismatch for {self.group_id}")
        return parse_presentation(data.decode("utf-8"), name=self.group_id)


def sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def data_root() -> Path:
    return Path(str(resources.files("charseries") / "data" / "corpus"))


def group_id(order: int, index: int, count: int = 99) -> str:
    """``o<order>_i<index>``, zero-padded so ids sort like indices among ``count`` groups."""
    width = max(2, len(str(count)))
    return f"o{order}_i{index:0{width}d}"


def scan_directory(directory, validate: bool = False) -> list[CorpusEntry]:
    """Entries of a corpus directory, using its manifest when present.

    Without a manifest every ``*.pc`` file becomes an entry (id = file stem)
    and its checksum is computed on the spot.
    """
    directory = Path(directory)
    man = directory / MANIFEST
    entries = []
    if man.exists():
        for row in json.loads(man.read_text()):
            entries.append(
                CorpusEntry(row["group_id"], directory / row["file"], row["sha256"], row["p"], row["n"])
            )
    else:
        for path in sorted(directory.glob("*.pc")):
            data = path.read_bytes()
            G = parse_presentation(data.decode("utf-8"))
            entries.append(CorpusEntry(path.stem, path, sha256(data), G.p, G.n))
    entries.sort(key=lambda e: e.group_id)
    if validate:
        for e in entries:
            G = e.load()
            if not is_consistent(G):
                raise CorpusError(f"{e.group_id} is not consistent")
    return entries


def bundled(order: int) -> list[CorpusEntry]:
    d = data_root() / f"o{order}"
    if not d.exists():
        return []
    return scan_directory(d)


def available_orders() -> list[int]:
    root = data_root()
    if not root.exists():
        return []
    return sorted(int(d.name[1:]) for d in root.iterdir() if d.is_dir() and d.name.startswith("o"))


def write_manifest(directory, entries: list[CorpusEntry]) -> None:
    directory = Path(directory)
    rows = [
        {"group_id": e.group_id, "file": e.path.name, "sha256": e.checksum, "p": e.p, "n": e.n}
        for e in entries
    ]
    (directory / MANIFEST).write_text(json.dumps(rows, indent=1) + "\n")


def fingerprint(G: PcPresentation) -> tuple:
    """Isomorphism invariants computed by brute force over all elements.

    Includes the element-order histogram, the order histogram of the
    center, series shapes, and the histogram of p-th power images.
    """
    elts = enumerate_elements(G)
    orders = Counter(G.element_order(x) for x in elts)
    Z = center(G)
    zorders = Counter(G.element_order(x) for x in Z.elements())
    powers = Counter(G.power(x, G.p) for x in elts)
    eta = exponent_p_central(G).factor_exponents()
    gamma = lower_central(G).factor_exponents()
    # class of each element's centralizer size
    cent = Counter(sum(1 for y in elts if G.mul(x, y) == G.mul(y, x)) for x in elts)
    return (
        G.p,
        G.n,
        tuple(sorted(orders.items())),
        tuple(sorted(zorders.items())),
        tuple(sorted(Counter(powers.values()).items())),
        tuple(eta),
        tuple(gamma),
        tuple(sorted(cent.items())),
    )
