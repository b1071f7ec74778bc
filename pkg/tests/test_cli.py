import json

from homcart.cli import main
from homcart.jsonio import complex_to_json, square_to_json, triangle_to_json, chain_map_to_json
from homcart.squares import square_from_cone
from homcart.suite import build_star, lemma2

from helpers import cmap, one_term, two_term


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_paper_verify_single_value(capsys):
    code, out, _ = run(capsys, "paper", "verify", "--a-min", "3", "--a-max", "3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["reports"][0]["middle_square_cartesian"]["verdict"] == "no"
    assert data["reports"][0]["middle_square_cartesian"]["modulus"] == 9


def test_paper_verify_below_range_guard(capsys):
    code, _, err = run(capsys, "paper", "verify", "--a-min", "2", "--a-max", "3")
    assert code == 3
    assert "allow-unclaimed" in err


def test_paper_verify_allow_unclaimed(capsys):
    code, out, _ = run(
        capsys, "paper", "verify", "--a-min", "2", "--a-max", "3", "--allow-unclaimed", "--format", "json"
    )
    assert code == 0
    data = json.loads(out)
    assert len(data["reports"]) == 2
    assert data["reports"][0]["claimed_range"] is False


def test_square_check_yes_and_no(tmp_path, capsys):
    b_obj = two_term(3)
    b = cmap(b_obj, one_term(), {0: [[2]]})
    g = cmap(b_obj, one_term(), {0: [[5]]})
    good = tmp_path / "good.json"
    good.write_text(json.dumps(square_to_json(square_from_cone(b, g))))
    code, out, _ = run(capsys, "square", "check", str(good), "--format", "json")
    assert code == 0
    assert json.loads(out)["verdict"] == "yes"

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(square_to_json(build_star(3).middle)))
    code, out, _ = run(capsys, "square", "check", str(bad), "--format", "json")
    assert code == 1
    payload = json.loads(out)
    assert payload["verdict"] == "no"
    assert payload["modulus"] == 9


def test_square_check_truncated_json(tmp_path, capsys):
    f = tmp_path / "trunc.json"
    f.write_text('{"corners": {')
    code, _, err = run(capsys, "square", "check", str(f))
    assert code == 3
    assert "error" in err


def test_complex_homology(tmp_path, capsys):
    f = tmp_path / "cx.json"
    f.write_text(json.dumps(complex_to_json(two_term(9))))
    code, out, _ = run(capsys, "complex", "homology", str(f), "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["1"] == {"free_rank": 0, "invariant_factors": [9]}


def test_triangle_verify(tmp_path, capsys):
    inst = lemma2(2, a=3)
    f = tmp_path / "tri.json"
    f.write_text(
        json.dumps(
            {
                "triangle": triangle_to_json(inst.triangle),
                "witness": chain_map_to_json(inst.witness),
            }
        )
    )
    code, out, _ = run(capsys, "triangle", "verify", str(f), "--format", "json")
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_unit_lemma_integers_no_solution(capsys):
    code, out, _ = run(capsys, "unit-lemma", "--ring", "z", "--eps", "3")
    assert code == 1
    assert "no solution" in out


def test_unit_lemma_residue(capsys):
    code, out, _ = run(capsys, "unit-lemma", "--ring", "zmod:9", "--eps", "3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["alpha"] == 0
    assert data["unit"] == 4


def test_unit_lemma_matrix_f2(capsys):
    code, out, _ = run(
        capsys,
        "unit-lemma",
        "--ring",
        "matf:2:2",
        "--eps",
        "[[0,1],[0,0]]",
        "--format",
        "json",
    )
    assert code == 0
    data = json.loads(out)
    assert data["coefficient"] == [["0", "0"], ["0", "0"]]


def test_unit_lemma_bad_ring(capsys):
    code, _, err = run(capsys, "unit-lemma", "--ring", "weird", "--eps", "1")
    assert code == 3


def test_fuzz_zero_trials(capsys):
    code, out, err = run(capsys, "fuzz", "prop2", "--trials", "0")
    assert code == 0
    assert "vacuous" in out
    assert "warning" in err


def test_fuzz_small_run_deterministic(capsys):
    code1, out1, _ = run(
        capsys, "fuzz", "prop2", "--field", "2", "--trials", "5", "--seed", "9", "--format", "json"
    )
    code2, out2, _ = run(
        capsys, "fuzz", "prop2", "--field", "2", "--trials", "5", "--seed", "9", "--format", "json"
    )
    assert code1 == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["yes"] == 5


def test_bad_config_is_usage_error(tmp_path, capsys):
    f = tmp_path / "sq.json"
    b_obj = two_term(3)
    b = cmap(b_obj, one_term(), {0: [[2]]})
    g = cmap(b_obj, one_term(), {0: [[5]]})
    f.write_text(json.dumps(square_to_json(square_from_cone(b, g))))
    code, _, err = run(capsys, "square", "check", str(f), "--max-enum", "0")
    assert code == 3
    code, _, err = run(capsys, "square", "check", str(f), "--moduli", "1")
    assert code == 3


def test_fuzz_rejects_non_prime_field(capsys):
    code, _, err = run(capsys, "fuzz", "prop2", "--field", "4", "--trials", "2")
    assert code == 3
    assert "prime" in err
