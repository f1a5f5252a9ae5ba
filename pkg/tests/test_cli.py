import io
import json
import shutil
import subprocess
import sys

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from hodgekit.cli import main

DET3 = {"dim": 3, "degree": 3, "terms": [{"exp": [1, 1, 1], "coef": "1"}]}
ORTH3 = {"generators": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)
    return write


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run(*argv, "--json")
    return code, json.loads(out)


def test_lorentzian_exit_codes(files):
    code, rep = run_json("lorentzian", "--form", files("f.json", DET3), "--cone", files("c.json", ORTH3))
    assert code == 0 and rep["verdict"] == "LORENTZIAN"
    sq = {"dim": 2, "degree": 2, "terms": [{"exp": [2, 0], "coef": 1}, {"exp": [0, 2], "coef": 1}]}
    code, rep = run_json("lorentzian", "--form", files("sq.json", sq),
                         "--cone", files("o2.json", {"generators": [[1, 0], [0, 1]]}))
    assert code == 1 and rep["certificate"]["witness"]["kind"] == "hessian"
    bad = {"dim": 2, "degree": 2, "terms": [{"exp": [2, -1], "coef": 1}]}
    code, rep = run_json("lorentzian", "--form", files("bad.json", bad), "--cone", files("o.json", ORTH3))
    assert code == 2 and rep["certificate"]["field"] == "form.terms[0].exp"


def test_classify(files):
    inst = files("dt3.json", {"diagonal_torus": 3})
    code, rep = run_json("classify", "--instance", inst, "--collection", files("l.json", {"classes": [[1, 1, 0]]}))
    assert code == 0 and rep["verdict"] == "CRITICAL"
    code, rep = run_json("classify", "--instance", inst, "--collection", files("w.json", [[1, 1, 1]]))
    assert rep["verdict"] == "SUPERCRITICAL"
    code, rep = run_json("classify", "--instance", files("dt2.json", {"diagonal_torus": 2}),
                         "--collection", files("e.json", {"classes": []}))
    assert code == 0 and rep["verdict"] == "SUPERCRITICAL (vacuous)"
    code, _, err = run("classify", "--instance", inst, "--collection", files("n.json", [[1, -1, 0]]))
    assert code == 2 and "nef" in err


def test_hl(files):
    inst = files("dt3.json", {"diagonal_torus": 3})
    code, rep = run_json("hl", "--instance", inst, "--collection", files("w.json", [[1, 1, 1]]), "--flags")
    assert code == 0 and rep["verdict"] == "HL"
    code, rep = run_json("hl", "--instance", inst, "--collection", files("l.json", [[1, 1, 0]]))
    assert code == 1 and rep["verdict"] == "NOT_HL"
    assert rep["certificate"]["kernel"] == [["1", "-1", "0"]]
    code, _, _ = run("hl", "--instance", inst, "--collection", files("two.json", [[1, 1, 0], [1, 1, 0]]))
    assert code == 2


def test_local_hii(files):
    inst = files("dt3.json", {"diagonal_torus": 3})
    coll = files("l.json", [[1, 1, 0]])
    code, rep = run_json("local-hii", "--instance", inst, "--collection", coll, "--r", "1", "--alpha", "1,-1,0")
    assert code == 0 and rep["verdict"] == "VERIFIED"
    assert rep["certificate"]["negated"] == ["0", "0", "1/3"]
    code, rep = run_json("local-hii", "--instance", inst, "--collection", coll, "--r", "1", "--alpha", "0,0,0")
    assert code == 0 and rep["certificate"]["beta"] == ["0", "0", "0"]
    code, _, err = run("local-hii", "--instance", inst, "--collection", coll, "--r", "1", "--alpha", "1,0,0")
    assert code == 2 and "e3" in err
    code, _, _ = run("local-hii", "--instance", files("dt4.json", {"diagonal_torus": 4}),
                     "--collection", files("ll.json", [[1, 1, 1, 0], [1, 1, 1, 0]]),
                     "--r", "1", "--alpha", "1,−1,0,0")
    assert code == 0


def test_bergman(files):
    code, rep = run_json("bergman", "--matroid", files("u23.json", {"uniform": [2, 3]}),
                         "--degree", "alpha;beta;F1")
    cert = rep["certificate"]
    assert code == 0 and len(cert["rays"]) == 3
    assert cert["degrees"] == {"alpha": "1", "beta": "2", "F1": "1"}
    assert cert["flag_monomials"]["all_equal_weight"]
    code, rep = run_json("bergman", "--matroid", files("u34.json", {"uniform": [3, 4]}), "--check-lorentzian")
    assert code == 0 and rep["certificate"]["lorentzian"]["verdict"] is True
    assert rep["certificate"]["mu_sequence"] == [1, 3, 3]
    code, _, _ = run("bergman", "--matroid", files("bad.json", {"ground_set": 4, "bases": [[1, 2], [3, 4]]}))
    assert code == 2


def test_logconcave(files):
    inst = files("dt3.json", {"diagonal_torus": 3})
    code, rep = run_json("logconcave", "--instance", inst, "--A", "1,1,1", "--B", "1,1,0")
    assert code == 0 and rep["certificate"]["sequence"] == ["0", "1/3", "2/3", "1"]
    code, rep = run_json("logconcave", "--instance", inst, "--A", "2,2,0", "--B", "1,1,0",
                         "--collection", files("w.json", [[1, 1, 1]]))
    hi = rep["certificate"]["hodge_index"]
    assert hi["c"] == "2" and hi["equality"] and hi["decomposition"] == {}
    code, _, _ = run("logconcave", "--instance", inst, "--A", "1,-1,0", "--B", "1,1,0")
    assert code == 2


def test_sweep():
    code, rep = run_json("sweep", "--trials", "3", "--instances", "DT3")
    assert code == 0 and rep["verdict"] == "PASS"


def test_deterministic_reports(files):
    argv = ["hl", "--instance", files("dt3.json", {"diagonal_torus": 3}),
            "--collection", files("l.json", [[1, 1, 0]]), "--json"]
    first, second = run(*argv)[1], run(*argv)[1]
    strip = [json.loads(x) for x in (first, second)]
    for r in strip:
        r.pop("timing")
    assert strip[0] == strip[1]
    assert [line for line in first.splitlines() if "seconds" not in line] == \
        [line for line in second.splitlines() if "seconds" not in line]


def test_usage_errors(files):
    assert run()[0] == 2
    assert run("classify", "--instance", "/nonexistent/x.json", "--collection", "y.json")[0] == 2
    assert run("classify", "--instance", files("bad.json", "{not json"), "--collection", "y.json")[0] == 2


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.recursive(st.none() | st.booleans() | st.integers(-3, 3) | st.text(max_size=4),
                    lambda c: st.lists(c, max_size=3) | st.dictionaries(
                        st.sampled_from(["dim", "degree", "terms", "exp", "coef", "classes",
                                         "diagonal_torus", "form"]), c, max_size=3),
                    max_leaves=8))
def test_malformed_input_never_crashes(files, junk):
    inst = files("dt3.json", {"diagonal_torus": 3})
    code, _, _ = run("classify", "--instance", inst, "--collection", files("junk.json", junk))
    assert code in (0, 1, 2)
    code, _, _ = run("lorentzian", "--form", files("junkf.json", junk), "--cone", files("o.json", ORTH3))
    assert code in (0, 1, 2)


def test_console_script(files):
    exe = shutil.which("hodgekit")
    cmd = [exe] if exe else [sys.executable, "-m", "hodgekit.cli"]
    proc = subprocess.run(cmd + ["lorentzian", "--form", files("f.json", DET3),
                                 "--cone", files("c.json", ORTH3)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "LORENTZIAN" in proc.stdout
