"""Deterministic two-part display names drawn from embedded word lists.

Each kind (node, sector, galaxy) owns its own prefix and suffix lists,
expanded at import time from fixed syllable tables. The lists are large
enough (hundreds of entries each) that a thousand random seeds produce only
a handful of name collisions.
"""

from __future__ import annotations

from .hashing import unit_float

_KINDS = ("node", "sector", "galaxy")

_PREFIX_SYLLABLES = {
    "node": (
        ("vel", "thr", "yak", "ard", "kry", "hal", "ser", "orm", "tav", "bex",
         "cal", "dra", "fen", "gor", "hes", "ilv", "jun", "kel", "lum", "mor",
         "nex", "oph", "pry", "quon"),
        ("is", "ex", "ar", "on", "ia", "us", "or", "en", "ix", "al", "um",
         "ra", "eth", "oss"),
    ),
    "sector": (
        ("cind", "vor", "zal", "merr", "tess", "rand", "uld", "brin", "nov",
         "sag", "rig", "alt", "denn", "korr", "phe", "lyr", "vex", "omb",
         "tet", "aur", "ixx", "sker", "wren", "ghal"),
        ("ine", "ath", "ea", "ov", "ul", "ese", "ara", "ost", "ent", "im",
         "ur", "ax", "oth", "eya"),
    ),
    "galaxy": (
        ("and", "cyg", "per", "lyn", "hyd", "cass", "cet", "eri", "forn",
         "gru", "horo", "ind", "lac", "mens", "oct", "pav", "phoe", "ret",
         "scu", "tuc", "vul", "cam", "cir", "dor"),
        ("ia", "us", "ara", "eon", "is", "umi", "ae", "yx", "ola", "ir",
         "ani", "es", "ude", "oa"),
    ),
}

_SUFFIX_SYLLABLES = {
    "node": (
        ("min", "mar", "drif", "cor", "gat", "hol", "ver", "cind", "sol",
         "bras", "tor", "ves", "nar", "quil", "fer", "dun"),
        ("or", "is", "a", "on", "ia", "ex", "ul", "an", "em", "yr", "ath",
         "ion", "ar", "une", "ost", "ine"),
    ),
    "sector": (
        ("exp", "verg", "marc", "bel", "arr", "spanc", "reac", "fiel", "shoa",
         "curr", "trav", "weft", "fold", "bloo", "rill", "stra"),
        ("anse", "ent", "hes", "tia", "ay", "erse", "hola", "ium", "ondo",
         "ess", "ine", "aith", "orra", "une", "eth", "anda"),
    ),
    "galaxy": (
        ("spir", "clust", "arc", "whor", "vort", "halo", "wheel", "crow",
         "veil", "curt", "plum", "garl", "cro", "fan", "bloss", "lattic"),
        ("al", "er", "ay", "ine", "ex", "ana", "ea", "nia", "ona", "ule",
         "ith", "and", "wn", "ome", "ia", "ern"),
    ),
}


def _expand(syllables: tuple[tuple[str, ...], tuple[str, ...]]) -> tuple[str, ...]:
    stems, tails = syllables
    return tuple((stem + tail).capitalize() for stem in stems for tail in tails)


PREFIXES: dict[str, tuple[str, ...]] = {k: _expand(_PREFIX_SYLLABLES[k]) for k in _KINDS}
SUFFIXES: dict[str, tuple[str, ...]] = {k: _expand(_SUFFIX_SYLLABLES[k]) for k in _KINDS}

# Distinct unit_float stream bases per kind keep node attributes, node names,
# sector labels and galaxy labels on independent draw streams of one seed.
_STREAM_BASE = {"node": 16, "sector": 24, "galaxy": 32}


def name_from_seed(seed: int, kind: str) -> str:
    """Two-part display name for ``seed``; stable per (seed, kind)."""
    if kind not in _KINDS:
        raise ValueError(f"unknown name kind: {kind!r}")
    base = _STREAM_BASE[kind]
    prefixes = PREFIXES[kind]
    suffixes = SUFFIXES[kind]
    prefix = prefixes[int(unit_float(seed, base) * len(prefixes))]
    suffix = suffixes[int(unit_float(seed, base + 1) * len(suffixes))]
    return f"{prefix} {suffix}"
