from __future__ import annotations

import re
import socket

import pytest

from galaxyatlas.cli import main
from galaxyatlas.hashing import hash_coordinate
from galaxyatlas.imagination import CacheEntry, CacheKey, FileCache, render_template, template_context
from galaxyatlas.plugins import default_registry
from galaxyatlas.universe import GenerationParams, cached_universe, record_from_seed
import galaxyatlas.verify as verify_mod

DIGEST_LINE = re.compile(r"^\d+,\d+\t[0-9a-f]{64}\t[0-9a-f]{64}$")


class TestUsage:
    def test_no_command_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_unknown_command_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["warp"])
        assert exc.value.code == 2

    def test_non_numeric_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["gen", "--density", "thick"])
        assert exc.value.code == 2

    def test_cache_requires_action(self):
        with pytest.raises(SystemExit) as exc:
            main(["cache"])
        assert exc.value.code == 2


class TestGen:
    def test_two_runs_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["gen", "--out", str(a)]) == 0
        assert main(["gen", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert a.read_bytes() == cached_universe(GenerationParams()).to_bytes()

    def test_flags_feed_generation(self, tmp_path):
        out = tmp_path / "u.json"
        assert main(["gen", "--world-seed", "9", "--galaxy-count", "1", "--out", str(out)]) == 0
        expected = cached_universe(GenerationParams(world_seed=9, galaxy_count=1))
        assert out.read_bytes() == expected.to_bytes()

    def test_out_of_range_density_exits_1(self, tmp_path, capsys):
        assert main(["gen", "--density", "9", "--out", str(tmp_path / "x")]) == 1
        assert "IllegalDensity" in capsys.readouterr().err

    def test_stdout_mode_emits_exact_bytes(self, capsysbinary):
        assert main(["gen"]) == 0
        captured = capsysbinary.readouterr()
        assert captured.out == cached_universe(GenerationParams()).to_bytes()


class TestVerify:
    def test_small_run_passes(self, capsys):
        assert main(["verify", "5"]) == 0
        out = capsys.readouterr().out
        assert "mix64 vectors ok" in out
        assert "verify ok: 5 coordinates" in out

    def test_zero_count_exits_1(self, capsys):
        assert main(["verify", "0"]) == 1
        assert "at least 1" in capsys.readouterr().err

    def test_emit_digests_output_is_stable(self, capsys):
        assert main(["verify", "3", "--emit-digests"]) == 0
        first = capsys.readouterr().out
        assert main(["verify", "3", "--emit-digests"]) == 0
        second = capsys.readouterr().out
        assert first == second
        lines = first.strip().splitlines()
        assert len(lines) == 3
        for line in lines:
            assert DIGEST_LINE.match(line), line

    def test_emit_digests_respects_seed(self, capsys):
        main(["verify", "2", "--emit-digests"])
        default_out = capsys.readouterr().out
        main(["verify", "2", "--world-seed", "123", "--emit-digests"])
        seeded_out = capsys.readouterr().out
        assert default_out != seeded_out

    def test_corrupt_vector_file_fails_naming_the_line(self, monkeypatch, capsys):
        class FakePath:
            def joinpath(self, name):
                return self

            def read_text(self):
                return "0\t1234\nnot a vector\n"

        class FakeResources:
            @staticmethod
            def files(package):
                return FakePath()

        monkeypatch.setattr(verify_mod, "resources", FakeResources)
        assert main(["verify", "2"]) == 1
        out = capsys.readouterr().out
        assert "FAIL mix64 vectors" in out
        assert "line 1" in out

    def test_wrong_vector_value_reports_both_sides(self, monkeypatch, capsys):
        class FakePath:
            def joinpath(self, name):
                return self

            def read_text(self):
                return "0000000000000000\t00000000000000ff\n"

        class FakeResources:
            @staticmethod
            def files(package):
                return FakePath()

        monkeypatch.setattr(verify_mod, "resources", FakeResources)
        assert main(["verify", "1"]) == 1
        out = capsys.readouterr().out
        assert "expected 0x00000000000000ff" in out


def seeded_entry() -> CacheEntry:
    spec = default_registry().get("mission-brief")
    seed = hash_coordinate(3, 4, 0)
    record = record_from_seed(seed)
    doc = render_template(spec.template, spec.schema, seed, template_context(record))
    key = CacheKey(f"{seed:016x}", "mission-brief", spec.schema.name, spec.schema.version)
    return CacheEntry(key=key, document=doc, created_at="2026-08-23T00:00:00Z")


class TestCache:
    def test_list_shows_entries(self, tmp_path, capsys):
        cache = FileCache(str(tmp_path))
        entry = seeded_entry()
        cache.put(entry)
        assert main(["cache", "list", "--dir", str(tmp_path)]) == 0
        out = capsys.readouterr().out.strip()
        assert out == (
            f"{entry.key.seed_hex}-mission-brief\tmission-brief/v1\thigh\t2026-08-23T00:00:00Z"
        )

    def test_clear_removes_entries(self, tmp_path, capsys):
        cache = FileCache(str(tmp_path))
        cache.put(seeded_entry())
        assert main(["cache", "clear", "--dir", str(tmp_path)]) == 0
        assert "removed 1" in capsys.readouterr().out
        assert cache.count() == 0

    def test_list_missing_dir_exits_1(self, tmp_path, capsys):
        missing = str(tmp_path / "nope")
        assert main(["cache", "list", "--dir", missing]) == 1
        assert "does not exist" in capsys.readouterr().err


class TestPortsAndScripts:
    def test_serve_rejects_busy_port(self, tmp_path, capsys):
        holder = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        holder.bind(("127.0.0.1", 0))
        port = holder.getsockname()[1]
        try:
            code = main(["serve", "--port", str(port), "--cache-dir", str(tmp_path / "c")])
        finally:
            holder.close()
        assert code == 1
        assert "already in use" in capsys.readouterr().err

    def test_stub_provider_rejects_busy_port(self, capsys):
        holder = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        holder.bind(("127.0.0.1", 0))
        port = holder.getsockname()[1]
        try:
            code = main(["stub-provider", "--port", str(port)])
        finally:
            holder.close()
        assert code == 1
        assert "already in use" in capsys.readouterr().err

    def test_stub_provider_rejects_unreadable_script(self, tmp_path, capsys):
        bad = tmp_path / "script.json"
        bad.write_text("{not json")
        assert main(["stub-provider", "--script", str(bad)]) == 1
        assert "cannot load script" in capsys.readouterr().err

    def test_stub_provider_rejects_non_array_script(self, tmp_path, capsys):
        bad = tmp_path / "script.json"
        bad.write_text('{"kind": "valid"}')
        assert main(["stub-provider", "--script", str(bad)]) == 1
        assert "JSON array" in capsys.readouterr().err

    def test_serve_rejects_bad_params_before_binding(self, tmp_path, capsys):
        assert main(["serve", "--galaxy-count", "99", "--cache-dir", str(tmp_path)]) == 1
        assert "IllegalGalaxyCount" in capsys.readouterr().err
