"""Determinism audit: prove that regeneration is storage.

Derives pseudo-random coordinates from the world seed, hashes each into a
node seed, and digests the resulting record plus its base-tier brief. A
second pass runs in a fresh child process; any byte drift between passes
is a failed audit. The bundled mixer test vectors are checked first.
"""

from __future__ import annotations

import subprocess
import sys
from importlib import resources

from .hashing import GOLDEN_GAMMA, MASK64, hash_coordinate, mix64
from .imagination import render_template, template_context
from .plugins import default_registry
from .serialize import content_digest
from .universe import record_from_seed

VECTOR_RESOURCE = "data/mix64_vectors.tsv"


def coordinates(world_seed: int, count: int) -> list[tuple[int, int]]:
    out = []
    for i in range(count):
        draw = mix64((world_seed + (i + 1) * GOLDEN_GAMMA) & MASK64)
        out.append((draw & 0xFFFFFFFF, draw >> 32))
    return out


def digest_lines(world_seed: int, count: int) -> list[str]:
    spec = default_registry().get("mission-brief")
    lines = []
    for x, y in coordinates(world_seed, count):
        seed = hash_coordinate(x, y, world_seed)
        record = record_from_seed(seed)
        record_sha = content_digest(record.to_dict())
        doc = render_template(spec.template, spec.schema, seed, template_context(record))
        doc_sha = content_digest(doc.to_wire())
        lines.append(f"{x},{y}\t{record_sha}\t{doc_sha}")
    return lines


def check_vectors() -> str | None:
    """None when every bundled vector matches; otherwise a description."""
    try:
        text = resources.files("galaxyatlas").joinpath(VECTOR_RESOURCE).read_text()
    except OSError as exc:
        return f"cannot read vector file: {exc}"
    for line_no, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            in_hex, out_hex = line.split("\t")
            value, expected = int(in_hex, 16), int(out_hex, 16)
        except ValueError:
            return f"vector line {line_no} is malformed: {line!r}"
        got = mix64(value)
        if got != expected:
            return f"vector line {line_no}: mix64(0x{value:016x}) = 0x{got:016x}, expected 0x{expected:016x}"
    return None


def run_verify(count: int, world_seed: int, out=None) -> int:
    out = out if out is not None else sys.stdout
    bad = check_vectors()
    if bad is not None:
        print(f"FAIL mix64 vectors: {bad}", file=out)
        return 1
    print("mix64 vectors ok", file=out)

    first = digest_lines(world_seed, count)
    command = [
        sys.executable,
        "-m",
        "galaxyatlas",
        "verify",
        str(count),
        "--world-seed",
        str(world_seed),
        "--emit-digests",
    ]
    proc = subprocess.run(command, capture_output=True, text=True)
    if proc.returncode != 0:
        print("FAIL second pass exited nonzero", file=out)
        print(proc.stderr, file=out)
        return 1
    second = proc.stdout.splitlines()
    if len(second) != len(first):
        print(f"FAIL second pass emitted {len(second)} lines, expected {len(first)}", file=out)
        return 1
    for a, b in zip(first, second):
        if a != b:
            coord = a.split("\t", 1)[0]
            print(f"FAIL coordinate {coord}: digests differ across processes", file=out)
            print(f"  first:  {a}", file=out)
            print(f"  second: {b}", file=out)
            return 1
    print(f"verify ok: {count} coordinates byte-identical across processes", file=out)
    return 0
