"""Command-line contract: outputs, formats and exit codes."""

import csv
import io
import json
import subprocess
import sys

import pytest

from qrr import cli, identities
from qrr.series import SignedMonomial as M
from qrr.terms import Prod, Term


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_expand_euler(capsys):
    assert run(capsys, "expand", "--expr", "euler_f", "--order", "15")[:2] == \
        (0, "1 - q - q^2 + q^5 + q^7 - q^12 - q^15\n")


def test_expand_theta(capsys):
    assert run(capsys, "expand", "--expr", "theta", "--a", "q", "--b", "q^3", "--order", "10")[1] == \
        "1 + q + q^3 + q^6 + q^10\n"


def test_expand_rr_first_csv(capsys):
    code, out, _ = run(capsys, "expand", "--expr", "RR_FIRST.rhs", "--order", "8", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [int(r["coefficient"]) for r in rows] == [1, 1, 1, 1, 2, 2, 3, 3, 4]


def test_expand_json_and_order_term(capsys):
    code, out, _ = run(capsys, "expand", "--expr", "R1.lhs", "--order", "4", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1 and doc["series"]["order"] == 4
    out = run(capsys, "expand", "--expr", "psi", "--a", "-q", "--order", "3", "--show-order-term")[1]
    assert out == "1 - q - q^3 + O(q^4)\n"


def test_expand_gf_and_poch(capsys):
    out = run(capsys, "expand", "--expr", "gf:AB", "--k", "3", "--r", "1", "--order", "6")[1]
    assert out.startswith("1 + q^3 + q^4 + q^5 + 2*q^6")
    out = run(capsys, "expand", "--expr", "poch", "--a", "q", "--b", "q", "--n", "3", "--order", "8")[1]
    assert out == "1 - q - q^2 + q^4 + q^5 - q^6\n"


def test_expand_rational_exponent(capsys):
    out = run(capsys, "expand", "--expr", "euler_f", "--s", "3/2", "--order", "3")[1]
    assert out == "1 - q^(3/2) - q^3\n"


@pytest.mark.parametrize("expr", ["nope", "R1.middle", "ZZZ.lhs", "theta"])
def test_expand_unknown(capsys, expr):
    code, _, err = run(capsys, "expand", "--expr", expr)
    assert code == 2 and err.startswith("error:")


def test_verify_r1_deep(capsys):
    code, out, _ = run(capsys, "verify", "--id", "R1", "--order", "120")
    assert code == 0 and out.startswith("R1") and "PASS" in out


def test_verify_bad_kr(capsys):
    code, _, err = run(capsys, "verify", "--id", "R1RK1", "--k", "3", "--r", "2")
    assert code == 2 and "require r < k/2" in err


def test_verify_missing_r(capsys):
    assert run(capsys, "verify", "--id", "R2RK1", "--k", "3")[0] == 2


def test_verify_all_json(capsys):
    code, out, _ = run(capsys, "verify", "--all", "--order", "60", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1 and doc["pass"] and doc["failed"] == 0
    assert len(doc["reports"]) == 47
    assert {"tag", "params", "order_certified", "pass", "millis"} <= set(doc["reports"][0])


def test_verify_deterministic_across_jobs(capsys):
    one = run(capsys, "verify", "--all", "--order", "30", "--format", "json", "--no-timing")[1]
    two = run(capsys, "verify", "--all", "--order", "30", "--format", "json", "--no-timing", "--jobs", "3")[1]
    assert one == two


def test_verify_corrupted_builder(capsys, monkeypatch):
    real = identities.BUILDERS["RR_FIRST"]

    def broken(c):
        s = real(c)
        s.rhs = Prod([s.rhs, Term(numer=[], extras=[[(1, M()), (1, M.q(7))]])])
        return s

    monkeypatch.setitem(identities.BUILDERS, "RR_FIRST", broken)
    code, out, _ = run(capsys, "verify", "--all", "--order", "30", "--format", "json", "--no-timing")
    doc = json.loads(out)
    bad = [r for r in doc["reports"] if not r["pass"]]
    assert code == 1 and len(bad) == 1
    assert bad[0]["tag"] == "RR_FIRST" and bad[0]["discrepancy"]["exponent"] == 7


def test_verify_table_and_roots(capsys):
    assert run(capsys, "verify", "--table", "2", "--row", "3")[0] == 0
    assert run(capsys, "verify", "--table", "post", "--row", "1")[0] == 0
    code, out, _ = run(capsys, "verify", "--table", "T1", "--row", "1", "--order", "20")
    assert code == 0 and out.startswith("T1.1 ")
    assert run(capsys, "verify", "--id", "R1", "--a", "-i", "--order", "30")[0] == 0
    assert run(capsys, "verify", "--id", "R1", "--a", "-q^1/2", "--x", "q^3/2", "--order", "30")[0] == 0
    assert run(capsys, "verify", "--id", "AQB", "--b", "-q", "--c", "q^2", "--order", "30")[0] == 0


def test_verify_usage_errors(capsys):
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "verify", "--id", "R1", "--all")[0] == 2
    assert run(capsys, "verify", "--id", "R1", "--order", "-1")[0] == 2
    assert run(capsys, "verify", "--id", "R1", "--a", "q^x")[0] == 2
    assert run(capsys, "verify", "--table", "1")[0] == 2
    assert run(capsys, "verify", "--table", "4", "--row", "1")[0] == 2
    assert run(capsys, "verify", "--table", "X", "--row", "1")[0] == 2
    assert run(capsys, "bogus")[0] == 2


def test_partitions_csv(capsys):
    code, out, _ = run(capsys, "partitions", "--theorem", "AB", "--k", "3", "--r", "1", "--n-max", "40",
                       "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["n", "left_count", "right_count", "gf_count", "equal"]
    assert len(rows) == 41 and all(r[4] == "1" for r in rows[1:])
    assert all(x.lstrip("-").isdigit() for r in rows[1:] for x in r)


def test_partitions_gh_first_row(capsys):
    code, out, _ = run(capsys, "partitions", "--theorem", "GH", "--k", "3", "--r", "1", "--n-max", "1",
                       "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1
    assert doc["rows"] == [{"n": 1, "left_count": 0, "right_count": 0, "gf_count": 0, "equal": True}]


def test_partitions_bad(capsys):
    assert run(capsys, "partitions", "--theorem", "AB", "--k", "3")[0] == 2
    assert run(capsys, "partitions", "--theorem", "AB", "--k", "4", "--r", "2")[0] == 2
    assert run(capsys, "partitions", "--theorem", "XY", "--k", "4", "--r", "1")[0] == 2


def test_partitions_mismatch_exit(capsys, monkeypatch):
    from qrr import partitions

    monkeypatch.setattr(partitions, "gf_counts", lambda *a: [1] + [0] * 10)
    assert run(capsys, "partitions", "--theorem", "AB", "--k", "3", "--r", "1", "--n-max", "10")[0] == 1


def test_catalog_listing(capsys):
    code, out, _ = run(capsys, "catalog")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 26 + 19 + 2 and lines[0].startswith("R1 ")
    doc = json.loads(run(capsys, "catalog", "--format", "json")[1])
    assert doc["schema"] == 1 and len(doc["entries"]) == 47


def test_out_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    assert run(capsys, "verify", "--id", "RR_FIRST", "--format", "json", "--out", str(path))[1] == ""
    assert json.loads(path.read_text())["reports"][0]["tag"] == "RR_FIRST"


def test_env_default_order(capsys, monkeypatch):
    monkeypatch.setenv("QRR_DEFAULT_ORDER", "7")
    doc = json.loads(run(capsys, "verify", "--id", "R1", "--format", "json")[1])
    assert doc["reports"][0]["order_certified"] == 7
    out = run(capsys, "expand", "--expr", "euler_f")[1]
    assert out == "1 - q - q^2 + q^5 + q^7\n"


def test_grammar():
    p = cli.parse_monomial
    assert p("-q^{3/2}") == -M.q(cli.Fraction(3, 2)) == p("-q^3/2")
    assert p("q^(-1)") == M.q(-1)
    assert p("1") == M() and p("-1") == M(-1)
    assert p("a*q^2") == M.a(1, 2)
    assert cli.parse_a("w3").n == 3 and cli.parse_a("-w3").power == 5
    with pytest.raises(cli.UsageError):
        p("q^")


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "qrr.cli", "expand", "--expr", "euler_f", "--order", "7"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "1 - q - q^2 + q^5 + q^7\n"
