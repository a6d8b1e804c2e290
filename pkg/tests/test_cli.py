"""The command-line front end: verbs, exit codes, round-trips, fuzzing."""

import json
import random
import re

import pytest

from globkit import cli, coherator as C, dsl


def run(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_stdlib_check_round_trip(tmp_path, capsys):
    path = str(tmp_path / "std.tower")
    code, out, _ = run(capsys, "stdlib", "--dim", "3", "--out", path)
    assert code == 0
    code, out, _ = run(capsys, "check", path)
    assert code == 0
    assert re.match(r"\d+ generators, levels 1-3, all admissible", out)
    # the reparsed tower is generator-by-generator identical
    tower, _ = C.stdlib(3)
    reparsed = dsl.parse_tower(open(path).read())
    assert reparsed.names() == tower.names()
    for name in tower.names():
        assert reparsed[name] == tower[name]


def test_pi_report(tmp_path, capsys):
    path = str(tmp_path / "std.tower")
    run(capsys, "stdlib", "--dim", "3", "--out", path)
    code, out, _ = run(capsys, "pi", path, "--kg1", "S3", "--n", "1")
    assert code == 0
    assert out.strip() == "pi_1 = S3 (order 6, nonabelian)"
    code, out, _ = run(capsys, "pi", path, "--kan", "Z4,2", "--n", "2")
    assert code == 0
    assert out.strip() == "pi_2 = Z4 (order 4, abelian)"
    code, out, _ = run(capsys, "pi", path, "--discrete", "3", "--n", "0")
    assert code == 0 and "3 classes" in out


def test_pi_json_format(tmp_path, capsys):
    path = str(tmp_path / "std.tower")
    run(capsys, "stdlib", "--dim", "3", "--out", path)
    code, out, _ = run(capsys, "pi", path, "--kg1", "Z2", "--n", "1",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["group"]["order"] == 2


def test_admissible_verdicts(tmp_path, capsys):
    path = str(tmp_path / "std.tower")
    run(capsys, "stdlib", "--dim", "3", "--out", path)
    code, out, _ = run(capsys, "admissible", path,
                       "--src", "eps2 * s1", "--tgt", "eps1 * t1",
                       "--target", "D1 +0 D1")
    assert code == 0 and "admissible" in out
    code, out, _ = run(capsys, "admissible", path,
                       "--src", "s2 * s1", "--tgt", "t2 * t1", "--target", "D2")
    assert code == 1
    assert "dimension of target exceeds n+1" in out


def test_normalize_verb(tmp_path, capsys):
    path = str(tmp_path / "std.tower")
    run(capsys, "stdlib", "--dim", "3", "--out", path)
    code, out, _ = run(capsys, "normalize", path, "--term", "comp2_1 * s2 * s1")
    assert code == 0
    assert out.strip() == "eps1 * s2 * s1"
    code, out, _ = run(capsys, "normalize", path, "--term", "unit0 * s1")
    assert code == 0 and out.strip() == "id"


def test_model_check_verb(tmp_path, capsys):
    path = str(tmp_path / "std.tower")
    run(capsys, "stdlib", "--dim", "3", "--out", path)
    code, out, _ = run(capsys, "model-check", path, "--kg1", "Z3")
    assert code == 0 and "clean" in out


def test_model_file_and_xmod_flags(tmp_path, capsys):
    from globkit import coherator as C, groups as G, model as M
    path = str(tmp_path / "std.tower")
    run(capsys, "stdlib", "--dim", "3", "--out", path)
    # a model file produced from a builtin checks clean through the file path
    tower, bundle = C.stdlib(3)
    model = M.build_strict(M.KG1(G.cyclic(2)), tower, bundle)
    mpath = str(tmp_path / "model.json")
    with open(mpath, "w") as fh:
        json.dump(M.model_to_json(model), fh)
    code, out, _ = run(capsys, "model-check", path, mpath)
    assert code == 0 and "clean" in out
    # crossed-module data through the --xmod flag
    xpath = str(tmp_path / "xm.json")
    with open(xpath, "w") as fh:
        json.dump({"base": "Z2", "fiber": "Z2", "boundary": [0, 0],
                   "action": [[0, 1], [0, 1]]}, fh)
    code, out, _ = run(capsys, "pi", path, "--xmod", xpath, "--n", "2")
    assert code == 0 and "pi_2 = Z2" in out
    # a corrupted model file is a check failure
    data = M.model_to_json(model)
    data["interp"]["inv1_0"][1]["out"] = 0
    with open(mpath, "w") as fh:
        json.dump(data, fh)
    code, out, _ = run(capsys, "model-check", path, mpath)
    assert code == 1 and "violation" in out


def test_weq_verb(tmp_path, capsys):
    path = str(tmp_path / "std.tower")
    run(capsys, "stdlib", "--dim", "3", "--out", path)
    morph = {"source": {"kg1": "Z2"}, "target": {"kg1": "Z4"},
             "map": [[0], [0, 2]]}
    mpath = str(tmp_path / "m.json")
    with open(mpath, "w") as fh:
        json.dump(morph, fh)
    code, out, _ = run(capsys, "weq", path, mpath)
    assert code == 0
    assert "weak equivalence: False" in out
    morph = {"source": {"kg1": "Z3"}, "target": {"kg1": "Z3"},
             "map": [[0], [0, 2, 1]]}
    with open(mpath, "w") as fh:
        json.dump(morph, fh)
    code, out, _ = run(capsys, "weq", path, mpath)
    assert code == 0 and "weak equivalence: True" in out


def test_fundamental_and_gpd_pi_verbs(tmp_path, capsys):
    from globkit import gpd as P
    from globkit import groups as G
    X = P.one_object(G.cyclic(3))
    gpath = str(tmp_path / "z3.json")
    with open(gpath, "w") as fh:
        json.dump(P.groupoid_to_json(X), fh)
    code, out, _ = run(capsys, "fundamental", gpath, "--dim", "3")
    assert code == 0
    assert "pi_1 at object 0 = Z3" in out
    code, out, _ = run(capsys, "gpd-pi", gpath, "--x", "0", "--n", "1")
    assert code == 0 and "pi_1 = Z3" in out
    code, out, _ = run(capsys, "gpd-pi", gpath, "--x", "0", "--n", "2")
    assert code == 0 and "pi_2 = Z1" in out


def test_divide_verb(tmp_path, capsys):
    path = str(tmp_path / "std.tower")
    run(capsys, "stdlib", "--dim", "3", "--out", path)
    code, out, _ = run(capsys, "divide", path, "--kan", "Z2,2",
                       "--n", "2", "--i", "0", "--gamma", "1", "--u", "0", "--v", "0")
    assert code == 0
    assert "identity on homotopy classes" in out


def test_user_tower_with_inferred_gluing(tmp_path, capsys):
    script = "\n".join([
        "dim 3",
        "# a user tower: composition, unit, and a right-unit-style lifting",
        "lift comp1_0 : D1 -> D1 +0 D1 ; src = eps2 * s1 ; tgt = eps1 * t1",
        "lift unit0 : D1 -> D0 ; src = id ; tgt = id",
        "lift squash : D2 -> D1 ; src = [id ; s1 * unit0] * comp1_0 ; tgt = id",
        "",
    ])
    path = str(tmp_path / "user.tower")
    with open(path, "w") as fh:
        fh.write(script)
    code, out, _ = run(capsys, "check", path)
    assert code == 0
    assert "3 generators" in out
    code, out, _ = run(capsys, "normalize", path, "--term", "squash * s2")
    assert code == 0
    # the boundary is the declared pairing, printed with its gluing dimension
    assert out.strip() == "[id ;0 s1 * unit0] * comp1_0"
    # and the model layer accepts the user tower with the builtin fillers
    code, out, _ = run(capsys, "pi", path, "--kg1", "Z3", "--n", "1")
    assert code == 1  # no inverse generators: the bundle is incomplete
    tower = dsl.parse_tower(script)
    assert tower["squash"].level == 2


def test_missing_file_is_exit_3(capsys):
    code, _, err = run(capsys, "check", "no-such-file.tower")
    assert code == 3


def test_malformed_scripts_exit_2_with_position(tmp_path, capsys):
    bad = "dim 3\nlift foo : D1 -> D1 +0 D1 ; src = eps2 * s1 tgt = eps1 * t1\n"
    path = str(tmp_path / "bad.tower")
    with open(path, "w") as fh:
        fh.write(bad)
    code, _, err = run(capsys, "check", path)
    assert code == 2
    assert re.search(r"line \d+, column \d+", err)


def _mutate(rng, text):
    """A near-miss: delete, duplicate, or insert a junk token."""
    tokens = text.split(" ")
    kind = rng.randrange(4)
    pos = rng.randrange(len(tokens))
    if kind == 0:
        del tokens[pos]
    elif kind == 1:
        tokens.insert(pos, rng.choice(["%%", "]", "(", "->", ";;", "D", "+x"]))
    elif kind == 2:
        tokens.insert(pos, tokens[pos])
    else:
        tokens[pos] = rng.choice(["?", "lift", ":", "*", "[", "dim", "eps0"])
    return " ".join(tokens)


def test_fuzzed_near_misses(tmp_path, capsys):
    tower, _ = C.stdlib(3)
    good = dsl.emit_tower(tower)
    rng = random.Random(0)
    path = str(tmp_path / "fuzz.tower")
    rejected = 0
    tried = 0
    while tried < 200:
        text = _mutate(rng, good)
        if text == good:
            continue
        tried += 1
        with open(path, "w") as fh:
            fh.write(text)
        code = cli.run(["check", path])
        out = capsys.readouterr()
        if code == 0:
            # a benign mutation that still parses to a valid tower must
            # reconstruct a well-formed script; anything else is a bug
            dsl.parse_tower(text)
            continue
        assert code in (1, 2), (code, text[:80])
        rejected += 1
        if code == 2:
            assert re.search(r"line \d+, column \d+", out.err), text[:120]
    assert rejected >= 150
