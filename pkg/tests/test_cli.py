import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgeiso.cli import main, reproduce_tables
from edgeiso.errors import InputError
from edgeiso.expr import Atom, Combo, ParseError, build, parse_construction

ATOMS = [
    Atom("K", (3,)),
    Atom("C", (5,)),
    Atom("path", (2,)),
    Atom("Q", (2,)),
    Atom("Kpp", (2,)),
    Atom("KppmM", (3, 1)),
    Atom("KmM", (4, 1)),
    Atom("KmC", (5,)),
    Atom("Km2C", (5,)),
    Atom("Kmulti", (2, 2)),
    Atom("petersen"),
    Atom("sKi", (2, 2)),
    Atom("hspi", (2, 2, 1)),
    Atom("circ", (6, 1, 3)),
]

exprs = st.recursive(
    st.sampled_from(ATOMS),
    lambda inner: st.one_of(
        st.builds(lambda a: Combo("complement", (a,)), inner),
        st.builds(
            lambda op, args: Combo(op, tuple(args)),
            st.sampled_from(["prod", "join", "union"]),
            st.lists(inner, min_size=2, max_size=3),
        ),
    ),
    max_leaves=6,
)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestParser:
    def test_examples(self):
        q3 = build("prod(K(2),K(2),K(2))")
        assert (q3.n, q3.edge_count) == (8, 12)
        g = build("KmM(10,3)")
        assert g.n == 10 and set(g.degrees()) == {6}
        c = build("complement(C(5))")
        assert (c.n, c.edge_count) == (5, 5)

    def test_whitespace(self):
        assert parse_construction(" join ( K( 2 ) ,\n\tC(4) ) ") == parse_construction("join(K(2),C(4))")

    def test_petersen_with_or_without_parens(self):
        assert parse_construction("petersen") == parse_construction("petersen()")

    def test_minus(self):
        g = build("minus(K(10),circ(10,1,2))")
        assert set(g.degrees()) == {5}
        with pytest.raises(InputError, match="subgraph"):
            build("minus(C(5),complement(C(5)))")
        with pytest.raises(InputError, match="vertices"):
            build("minus(K(5),K(4))")

    @pytest.mark.parametrize(
        "text,offset",
        [("K(2", 3), ("K(2)x", 4), ("foo(1)", 0), ("K(a)", 2), ("join(K(2) K(2))", 10), ("", 0), ("K(2)$", 4)],
    )
    def test_syntax_errors_report_offset(self, text, offset):
        with pytest.raises(ParseError) as exc:
            parse_construction(text)
        assert exc.value.offset == offset
        assert "expected" in str(exc.value) or "unexpected character" in str(exc.value)

    def test_offset_is_in_bytes(self):
        with pytest.raises(ParseError) as exc:
            parse_construction("K(2)é")
        assert exc.value.offset == 4
        with pytest.raises(ParseError) as exc:
            parse_construction("join(K(2),é)")
        assert exc.value.offset == 10

    def test_arity_and_constraints(self):
        with pytest.raises(InputError, match="at least 2"):
            parse_construction("union(K(2))")
        with pytest.raises(InputError, match="p even"):
            build("KmM(9,2)")
        with pytest.raises(InputError, match="1 integer"):
            build("K(2,3)")

    @settings(max_examples=150, deadline=None)
    @given(exprs)
    def test_round_trip(self, e):
        assert parse_construction(str(e)) == e

    @settings(max_examples=30, deadline=None)
    @given(exprs)
    def test_build_is_valid(self, e):
        try:
            g = build(e)
        except InputError:
            return
        assert g.n >= 1


class TestCommands:
    def test_square_theorem_example(self, capsys):
        code, out, _ = run(capsys, "square", "--s", "3", "--p", "4", "--i", "2", "--format", "json", "--strict")
        assert code == 0
        res = json.loads(out)["report"]["results"]
        assert res["lex_optimal"] is True and res["verdict"] == "lex-optimal"

    def test_enumerate_json(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--length", "10", "--format", "json")
        assert code == 0 and json.loads(out)["report"]["results"]["count"] == 36

    def test_classify_nine(self, capsys):
        code, out, _ = run(capsys, "classify", "--length", "9", "--format", "json", "--strict")
        res = json.loads(out)["report"]["results"]
        assert code == 0 and res["isoperimetric"] == 5 and res["golden_mismatches"] == []

    def test_strict_negative(self, capsys):
        assert run(capsys, "square", "--graph", "KmC(7)", "--strict")[0] == 1
        assert run(capsys, "square", "--graph", "KmC(7)")[0] == 0

    def test_exit_codes(self, capsys):
        assert run(capsys, "exact", "--graph", "K(3")[0] == 2
        assert run(capsys, "exact", "--graph", "KmM(9,1)")[0] == 2
        assert run(capsys, "exact")[0] == 2
        assert run(capsys, "square", "--delta", "0,1", "--graph", "K(2)")[0] == 2
        assert run(capsys, "nonsense")[0] == 2
        code, _, err = run(capsys, "exact", "--graph", "K(25)")
        assert code == 3 and "capacity" in err
        assert run(capsys, "cube", "--delta", "0,1,2,3,4,5,6")[0] == 3
        assert run(capsys, "enumerate", "--length", "17")[0] == 3

    def test_delta_and_order(self, capsys):
        code, out, _ = run(capsys, "delta", "--graph", "petersen", "--format", "json")
        res = json.loads(out)["report"]["results"]
        assert code == 0 and res["symmetric"] and res["appropriate"] and res["graph"]["regular"]
        code, out, _ = run(capsys, "order", "--graph", "Q(3)", "--format", "json")
        assert json.loads(out)["report"]["results"]["found"]

    def test_graph_file(self, capsys, tmp_path):
        path = tmp_path / "c5.json"
        path.write_text(json.dumps({"n": 5, "edges": [[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]]}))
        code, out, _ = run(capsys, "exact", "--graph", str(path), "--format", "json")
        assert code == 0 and json.loads(out)["report"]["results"]["I"] == [0, 0, 1, 2, 3, 5]

    def test_delta_file_and_csv(self, capsys, tmp_path):
        path = tmp_path / "d.json"
        path.write_text("[0, 1, 2]")
        code, out, _ = run(capsys, "square", "--delta", str(path), "--format", "csv")
        lines = out.strip().splitlines()
        assert code == 0 and lines[0] == "m,W,lexW,gap" and len(lines) == 11

    def test_cube(self, capsys):
        code, out, _ = run(capsys, "cube", "--delta", "0,1", "--format", "json")
        res = json.loads(out)["report"]["results"]
        assert code == 0 and res["W3"] == [0, 0, 1, 2, 4, 5, 7, 9, 12] and res["lex_optimal"]

    def test_compose_and_hspi(self, capsys):
        code, out, _ = run(capsys, "compose", "--graph", "Kpp(2)", "--sizes", "4,3,2", "--format", "json", "--strict")
        res = json.loads(out)["report"]["results"]
        assert code == 0 and res["order_optimal"] and res["n"] == 9
        code, out, _ = run(capsys, "hspi", "--s", "3", "--p", "4", "--i", "2", "--format", "json", "--strict")
        res = json.loads(out)["report"]["results"]
        assert code == 0 and res["brute_force_delta"] == res["expected_delta"]
        assert res["conjecture_regular"] == {"counterexample": False, "lex_optimal": True, "regular": True}

    def test_compose_bad_sizes(self, capsys):
        assert run(capsys, "compose", "--graph", "K(4)", "--sizes", "2,3")[0] == 2

    def test_table_output(self, capsys):
        code, out, _ = run(capsys, "classify", "--length", "9")
        assert code == 0 and "lemma1-refuted" in out and "in_tables" in out


class TestReportsAndCache:
    def test_payload_is_deterministic(self, capsys):
        a = json.loads(run(capsys, "classify", "--length", "10", "--format", "json")[1])
        b = json.loads(run(capsys, "classify", "--length", "10", "--format", "json")[1])
        assert json.dumps(a["report"], sort_keys=True) == json.dumps(b["report"], sort_keys=True)
        assert set(a) == {"report", "wall_time_s"}
        assert "wall_time_s" not in json.dumps(a["report"])

    def test_cache(self, capsys, tmp_path):
        argv = ["square", "--graph", "petersen", "--format", "json", "--cache-dir", str(tmp_path)]
        first = json.loads(run(capsys, *argv)[1])["report"]
        files = list(tmp_path.iterdir())
        assert len(files) == 1 and files[0].name.startswith("square-")
        second = json.loads(run(capsys, *argv)[1])["report"]
        assert first == second
        # a different input gets its own file
        run(capsys, "square", "--graph", "K(3)", "--cache-dir", str(tmp_path))
        assert len(list(tmp_path.iterdir())) == 2

    def test_cache_ignores_other_versions(self, capsys, tmp_path):
        argv = ["enumerate", "--length", "5", "--format", "json", "--cache-dir", str(tmp_path)]
        run(capsys, *argv)
        (path,) = tmp_path.iterdir()
        data = json.loads(path.read_text())
        data["version"] = "0.0.0"
        data["payload"]["count"] = -1
        path.write_text(json.dumps(data))
        assert json.loads(run(capsys, *argv)[1])["report"]["results"]["count"] != -1


@pytest.fixture(scope="module")
def rep():
    return reproduce_tables()


class TestReproduce:
    def test_counts(self, rep):
        assert rep["counts"] == {
            "9": {"sequences": 10, "isoperimetric": 5},
            "10": {"sequences": 36, "isoperimetric": 11},
            "11": {"sequences": 28, "isoperimetric": 5},
        }

    def test_examples(self, rep):
        rows = {(t["table"], r["label"]): r for t in rep["tables"] for r in t["rows"]}
        k333 = rows[(1, "K_{3,3,3} or K_9-3C_3*")]
        assert k333["expected"] == [0, 1, 2, 2, 3, 4, 4, 5, 6]
        assert all(rz["match"] for rz in k333["realizations"])
        k10 = rows[(2, "K_10-4M")]
        assert k10["realizations"][0]["match"] and k10["expected"] == [0, 1, 2, 2, 2, 3, 3, 3, 4, 5]
        assert rows[(3, "previously unknown*")]["note"] == "no catalog realization"

    def test_mismatch_is_reported(self, rep):
        # K_11 minus the steps-1,2 circulant lands on a different table row
        assert len(rep["mismatches"]) == 1 and "K_11-2C_11" in rep["mismatches"][0]
        side = {s["expression"]: s["matches"] for s in rep["side_constructions"]}
        assert side["Km2C(11)"] == ["table 3 row 1"]
        assert side["minus(K(11),union(K(5),Kmulti(3,2)))"] == ["table 3 row 0"]

    def test_strict_exit(self, capsys):
        assert run(capsys, "reproduce-tables", "--strict")[0] == 1
        assert run(capsys, "reproduce-tables")[0] == 0
