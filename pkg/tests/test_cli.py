import json

import numpy as np
import pytest

import multischmidt as ms
from multischmidt.cli import (
    analyze_state,
    load_state_file,
    main,
    reproduce_rows,
    save_state_file,
    serialize_state,
)

FAST_FLAGS = ["--restarts", "16", "--iters", "150"]


class TestStateFiles:
    def test_gen_w3(self, tmp_path, capsys):
        out = tmp_path / "w3.json"
        assert main(["gen", "w", "--m", "3", "--out", str(out)]) == 0
        printed = capsys.readouterr().out
        assert "dims=[2, 2, 2]" in printed and "norm=1" in printed
        state = load_state_file(str(out))
        assert np.allclose(state.amplitudes, ms.w_state(3).amplitudes)

    def test_gen_ghz(self, tmp_path):
        out = tmp_path / "g.json"
        main(["gen", "ghz", "--m", "3", "--d", "2", "--out", str(out)])
        state = load_state_file(str(out))
        nz = np.abs(state.amplitudes) > 1e-12
        assert nz.sum() == 2

    def test_gen_random_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["gen", "random", "--dims", "2,2,2", "--seed", "7", "--out", str(a)])
        main(["gen", "random", "--dims", "2,2,2", "--seed", "7", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_round_trip_byte_identical(self, tmp_path):
        path = tmp_path / "state.json"
        main(["gen", "random", "--dims", "2,3", "--seed", "3", "--out", str(path)])
        original = path.read_text()
        payload = json.loads(original)
        state = load_state_file(str(path))
        again = serialize_state(state, name=payload.get("name"), seed=payload.get("seed"))
        assert again == original

    def test_malformed_file_rejected(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"dims": [2, 2], "amplitudes": [[1.0, 0.0]]}')
        assert main(["analyze", str(bad)]) == 2
        assert "error" in capsys.readouterr().err

    def test_unnormalized_file_rejected(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(
            '{"dims": [2], "amplitudes": [[1.0, 0.0], [1.0, 0.0]]}'
        )
        with pytest.raises(ValueError):
            load_state_file(str(bad))


class TestAnalyze:
    def test_w3_report_fields(self, tmp_path, capsys):
        path = tmp_path / "w3.json"
        save_state_file(str(path), ms.w_state(3))
        sidecar = tmp_path / "report.json"
        assert main(["analyze", str(path), "--json", str(sidecar)]) == 0
        out = capsys.readouterr().out
        assert "GenuinelyEntangled" in out
        assert "4 (exact)" in out
        payload = json.loads(sidecar.read_text())
        assert payload["schmidt_number"] == {"lo": 4, "hi": 4, "exact": True}
        assert payload["generalized_eof"] == pytest.approx(1.9591479, abs=1e-4)

    def test_sidecar_deterministic(self, tmp_path):
        path = tmp_path / "st.json"
        main(["gen", "random", "--dims", "2,2,2", "--seed", "5", "--out", str(path)])
        s1, s2 = tmp_path / "r1.json", tmp_path / "r2.json"
        main(["analyze", str(path), "--json", str(s1), "--seed", "3", *FAST_FLAGS])
        main(["analyze", str(path), "--json", str(s2), "--seed", "3", *FAST_FLAGS])
        assert s1.read_bytes() == s2.read_bytes()

    def test_product_state_report(self, tmp_path, capsys):
        path = tmp_path / "p.json"
        save_state_file(str(path), ms.basis_state(ms.qubits(3), (0, 0, 0)))
        main(["analyze", str(path)])
        out = capsys.readouterr().out
        assert "FullySeparable" in out
        assert "1 (exact)" in out
        assert "0.000000000 bits" in out

    def test_unsupported_coefficients_still_exit_zero(self, tmp_path, capsys):
        path = tmp_path / "w5.json"
        save_state_file(str(path), ms.w_state(5))
        assert main(["analyze", str(path), *FAST_FLAGS]) == 0
        out = capsys.readouterr().out
        assert "unsupported" in out

    def test_report_object_direct(self):
        report = analyze_state(ms.ghz_state(3), ms.DEFAULT_BUDGET, 1e-8)
        assert report.classification == ms.GENUINELY_ENTANGLED
        assert report.local_ranks == (2, 2, 2)
        assert report.value_hi == 3 and report.exact
        assert report.generalized_eof == pytest.approx(1.5, abs=1e-9)


class TestReproduce:
    def test_all_rows_pass(self, capsys):
        assert main(["reproduce"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out
        assert out.strip().endswith("rows passed")

    def test_broken_tolerance_fails_rank_rows(self, capsys):
        assert main(["reproduce", "--tol", "0.5"]) != 0
        assert "FAIL" in capsys.readouterr().out

    def test_seed_robustness(self):
        rows1 = reproduce_rows(ms.SearchBudget(seed=1), 1e-8)
        rows2 = reproduce_rows(ms.SearchBudget(seed=2), 1e-8)
        assert [r.ok for r in rows1] == [r.ok for r in rows2]
        assert all(r.ok for r in rows1)
