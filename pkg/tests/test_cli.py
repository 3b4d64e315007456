from __future__ import annotations

import io
import subprocess
import sys

import pytest

from kcplan import fixtures
from kcplan.cli import main
from kcplan.planner import Plan

BRIDGE_17 = (
    "PLAN: crossTogether(joe,jack):2; cross(joe):1; takeLamp(william); crossTogether(william,averell):10; "
    "takeLamp(jack); cross(jack):2; crossTogether(joe,jack):2 COST: 17"
)


def run(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    rc = main(list(argv), stdout=out, stderr=err, stdin=io.StringIO(stdin))
    return rc, out.getvalue(), err.getvalue()


def plan_lines(text):
    return [Plan.parse(x) for x in text.splitlines() if x.startswith("PLAN:")]


def test_bridge_golden_line():
    rc, out, _ = run("plan", "--fixture", "bridge")
    assert rc == 0
    assert out.splitlines()[0] == BRIDGE_17
    assert "OPTIMAL COST: 17" in out


def test_files_in_order(tmp_path):
    paths = []
    for f in fixtures.files("bridge"):
        p = tmp_path / f.replace("/", "_")
        p.write_text(fixtures.read(f))
        paths.append(str(p))
    rc, out, _ = run("plan", *paths, "-planlength=5", "--all")
    assert rc == 0
    plans = plan_lines(out)
    assert len(plans) == 6 and {p.cost for p in plans} == {19}


def test_buying_bound():
    assert run("plan", "--fixture", "buying", "-costbound=6")[0] == 1
    rc, out, _ = run("plan", "--fixture", "buying")
    assert rc == 0 and "COST: 7" in out


def test_dlv_style_integer_bound():
    rc, out, _ = run("plan", "--fixture", "buying", "-N=10")
    assert rc == 0 and "OPTIMAL COST: 7" in out


def test_secure_bridge():
    assert run("plan", "--fixture", "bridge-secure", "--secure", "-planlength=7", "-costbound=17")[0] == 1
    rc, out, _ = run("plan", "--fixture", "bridge-secure", "--secure", "-planlength=8")
    assert rc == 0 and "OPTIMAL COST: 17" in out


def test_deepening():
    rc, out, _ = run("plan", "--fixture", "blocks-p0", "-planlength=0", "--deepen", "5")
    assert rc == 0
    assert "PLAN LENGTH: 2" in out and plan_lines(out)[0].cost == 6


def test_deepening_gives_up():
    rc, _, err = run("plan", "--fixture", "blocks-p0", "-planlength=0", "--deepen", "1")
    assert rc == 1 and err


def test_tsp_all_plans():
    rc, out, _ = run("plan", "--fixture", "tsp", "--all")
    assert rc == 0 and len(plan_lines(out)) == 10


def test_confirm_prompts_for_more_plans():
    rc, out, _ = run("plan", "--fixture", "tsp", "--all", "--confirm", stdin="n\n")
    assert rc == 0 and len(plan_lines(out)) == 1


@pytest.mark.parametrize(
    "args,lines",
    [
        (("--gamma", "--horizon", "6"), ("DECODED: steps=3 cost=5", "COST: 39")),
        (("--delta", "--horizon", "6", "--factor", "42", "--allow-tight-factor"), ("DECODED: steps=2 cost=6", "COST: 132")),
    ],
)
def test_rewrite_and_solve(args, lines):
    rc, out, _ = run("rewrite", "--fixture", "blocks-p0", *args, "--solve")
    assert rc == 0
    for x in lines:
        assert x in out


def test_tight_factor_is_an_error():
    rc, _, err = run("rewrite", "--fixture", "blocks-p0", "--delta", "--horizon", "6", "--factor", "42")
    assert rc == 2 and "safe bound" in err


def test_rewrite_output_parses(tmp_path):
    target = tmp_path / "gamma.plan"
    rc, _, _ = run("rewrite", "--fixture", "blocks-p0", "--gamma", "--horizon", "6", "-o", str(target))
    assert rc == 0
    rc, out, _ = run("plan", str(target))
    assert rc == 0 and "OPTIMAL COST: 39" in out


def test_translate_to_file(tmp_path, golden):
    target = tmp_path / "bridge.lpw"
    assert run("translate", "--fixture", "bridge", "-o", str(target))[0] == 0
    assert target.read_text() == (golden / "bridge.lpw").read_text()
    rc, out, _ = run("translate", "--fixture", "buying", "--minimize")
    assert rc == 0 and out == (golden / "buying.min").read_text()


def test_check():
    assert run("check", "--fixture", "tsp")[0] == 0
    rc, out, _ = run("check", "--fixture", "bad-conflicting-cost")
    assert rc == 2 and "buy(ticket)" in out


@pytest.mark.parametrize(
    "argv",
    [
        ("plan", "/nonexistent/file.plan"),
        ("plan", "--fixture", "bad-missing-witness"),
        ("plan",),
        ("frobnicate",),
    ],
)
def test_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_syntax_error_reports_position(tmp_path):
    bad = tmp_path / "bad.plan"
    bad.write_text("fluents: f.\nactions: a costs.\n")
    rc, _, err = run("plan", str(bad))
    assert rc == 2 and "bad.plan:2" in err


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "kcplan", "plan", "--fixture", "buying", "-costbound=6"], capture_output=True)
    assert r.returncode == 1
