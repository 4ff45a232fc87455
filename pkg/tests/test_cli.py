import json
import math

import pytest

from loopwalk.cli import main

from conftest import FIXTURE_DIR


@pytest.fixture
def graph_file(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


@pytest.fixture
def p3(graph_file):
    return graph_file("p3.txt", "0 1\n1 2\n")


@pytest.fixture
def p5(graph_file):
    return graph_file("p5.txt", "0 1\n1 2\n2 3\n3 4\n")


@pytest.fixture
def k2(graph_file):
    return graph_file("k2.txt", "0 1\n")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestAnalyze:
    def test_k2(self, capsys, k2):
        code, out = run(capsys, "analyze", "-g", k2, "-u", "0", "-v", "1", "-Q", "5")
        assert code == 0
        payload = json.loads(out)
        assert payload["schema"] == 1
        assert payload["t0"] == pytest.approx(math.pi / 2)
        assert payload["p_t0"] == pytest.approx(1.0, abs=1e-9)
        assert payload["cospectrality"] == "infinity"
        assert payload["tunneling_class"] == "ASYMPTOTIC"

    def test_p5_high_q(self, capsys, p5):
        code, out = run(capsys, "analyze", "-g", p5, "-u", "0", "-v", "4", "-Q", "227")
        assert code == 0
        payload = json.loads(out)
        assert payload["p_t0"] >= 0.96
        assert payload["p_star"] >= payload["p_t0"] - 1e-9
        assert payload["gershgorin"]["n_top"] == 2

    def test_missing_q_is_usage_error(self, capsys, p3):
        code, _ = run(capsys, "analyze", "-g", p3, "-u", "0", "-v", "2")
        assert code == 2

    def test_bad_graph_file(self, capsys, tmp_path):
        code, _ = run(capsys, "analyze", "-g", str(tmp_path / "nope.txt"),
                      "-u", "0", "-v", "1", "-Q", "1")
        assert code == 2

    def test_deterministic_output(self, capsys, p3):
        argv = ["analyze", "-g", p3, "-u", "0", "-v", "2", "-Q", "10"]
        _, a = run(capsys, *argv)
        _, b = run(capsys, *argv)
        assert a == b


class TestCertify:
    def test_p5_passes(self, capsys, p5):
        code, out = run(capsys, "certify", "-g", p5, "-u", "0", "-v", "4",
                        "--epsilon", "0.04", "--delta", "0.05")
        assert code == 0
        payload = json.loads(out)
        assert payload["all_passed"] is True
        assert payload["schema"] == 1

    def test_partial_fixture_exit_4(self, capsys):
        code, out = run(capsys, "certify", "-g", f"{FIXTURE_DIR}/partial.txt",
                        "-u", "0", "-v", "2", "--epsilon", "0.04")
        assert code == 4
        assert json.loads(out)["tunneling_class"] == "PARTIAL"

    def test_epsilon_out_of_range(self, capsys, p3):
        code, _ = run(capsys, "certify", "-g", p3, "-u", "0", "-v", "2",
                      "--epsilon", "1.5")
        assert code == 2


class TestCurve:
    def test_three_rows_nondecreasing(self, capsys, p3):
        code, out = run(capsys, "curve", "-g", p3, "-u", "0", "-v", "2",
                        "--q-list", "10,40,160")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "Q,gap,t0,p_t0,t_star,p_star,certified"
        stars = [float(line.split(",")[5]) for line in lines[1:]]
        assert stars == sorted(stars)

    def test_empty_q_list(self, capsys, p3):
        code, _ = run(capsys, "curve", "-g", p3, "-u", "0", "-v", "2", "--q-list", ",")
        assert code == 2

    def test_uncertified_row_flag(self, capsys, p3):
        code, out = run(capsys, "curve", "-g", p3, "-u", "0", "-v", "2", "--q-list", "2")
        assert code == 0
        assert out.strip().split("\n")[1].endswith("false")


class TestWalks:
    def test_p3_pattern(self, capsys, p3):
        code, out = run(capsys, "walks", "-g", p3, "-u", "0", "-v", "2", "-K", "6")
        assert code == 0
        payload = json.loads(out)
        # only the length-2 bounce u-mid-u avoids {u, v} in its interior
        assert payload["counts"]["uu"] == ["0", "1", "0", "0", "0", "0"]
        assert payload["counts"]["uv"] == ["0", "1", "0", "0", "0", "0"]

    def test_k_zero_rejected(self, capsys, p3):
        code, _ = run(capsys, "walks", "-g", p3, "-u", "0", "-v", "2", "-K", "0")
        assert code == 2


class TestExtend:
    def test_p3_lambda5(self, capsys, p3):
        code, out = run(capsys, "extend", "-g", p3, "-u", "0", "-v", "2",
                        "--lambda", "5")
        assert code == 0
        payload = json.loads(out)
        assert payload["Q"] == pytest.approx(4.6, rel=1e-10)
        assert payload["phi"] == pytest.approx([1.0, 0.4, 1.0], abs=1e-10)
        assert payload["residual"] < 1e-10

    def test_lambda_below_m_exit_3(self, capsys, p3):
        code, _ = run(capsys, "extend", "-g", p3, "-u", "0", "-v", "2",
                      "--lambda", "1.5")
        assert code == 3

    def test_output_file(self, tmp_path, capsys, p3):
        out_path = tmp_path / "out.json"
        code, _ = run(capsys, "extend", "-g", p3, "-u", "0", "-v", "2",
                      "--lambda", "5", "-o", str(out_path))
        assert code == 0
        assert json.loads(out_path.read_text())["Q"] == pytest.approx(4.6)
