"""Smoke tests for the python bindings: the module imports, the bundled
cells reproduce their load case tables, and the solve/homogenize pipeline
runs end to end."""

import numpy as np

import rucell


def test_spec_roundtrip_and_validation():
    spec = rucell.fixtures.honeycomb_spec()
    assert spec.dim == 2
    assert spec.kind == "rUC"
    assert spec.labels == ["E1", "E2", "E3"]
    again = rucell.load_spec(spec.to_json())
    assert again.labels == spec.labels
    report = rucell.validate(spec)
    assert report.ok, report.summary


def test_honeycomb_case_table():
    cases = rucell.enumerate_load_cases(rucell.fixtures.honeycomb_spec())
    assert [c.gammas for c in cases] == [[1, 1, 1], [1, -1, -1]]
    assert [c.dimension for c in cases] == [2, 1]


def test_woven_case_table():
    cases = rucell.enumerate_load_cases(rucell.fixtures.woven3d_spec())
    assert [c.gammas for c in cases] == [[1, 1, 1, 1, 1, 1], [1, 1, -1, -1, 1, 1]]


def test_admissibility_from_numpy():
    spec = rucell.fixtures.honeycomb_spec()
    shear = np.array([[0.0, 0.01], [0.01, 0.0]])
    g = rucell.check_admissibility(spec, shear)
    assert g.admissible
    assert g.gammas == [1, -1, -1]

    mixed = np.array([[0.01, 0.01], [0.01, 0.0]])
    g2 = rucell.check_admissibility(spec, mixed)
    assert not g2.admissible
    assert g2.worst_relation in ("E2", "E3")


def test_solve_and_averages():
    spec = rucell.fixtures.honeycomb_spec()
    mesh = rucell.fixtures.honeycomb_ruc_mesh(1)
    materials = {1: {"E": 70.0, "nu": 0.33}}
    eps = np.array([[0.01, 0.0], [0.0, 0.0]])
    sol = rucell.solve(mesh, spec, materials, eps)
    assert sol.gammas == [1, 1, 1]
    assert sol.constraint_residual < 1e-9
    assert sol.average_stress.shape == (2, 2)


def test_homogenize_checkerboard():
    spec = rucell.fixtures.checkerboard_ruc_spec()
    mesh = rucell.fixtures.checkerboard_ruc_mesh(1)
    materials = {1: {"E": 1.0, "nu": 0.3}, 2: {"E": 10.0, "nu": 0.3}}
    h = rucell.homogenize(mesh, spec, materials)
    assert h.complete
    C = h.C
    assert C.shape == (3, 3)
    assert np.allclose(C, C.T)
    assert np.all(np.linalg.eigvalsh(C) > 0)
    # square symmetry of the checkerboard: C11 == C22
    assert abs(C[0, 0] - C[1, 1]) < 1e-9 * abs(C[0, 0])


def test_constraints_json():
    spec = rucell.fixtures.honeycomb_spec()
    mesh = rucell.fixtures.honeycomb_ruc_mesh(1)
    payload = rucell.constraints_json(mesh, spec, np.array([[0.01, 0.0], [0.0, 0.0]]))
    assert '"equations"' in payload


def test_errors_are_typed():
    spec = rucell.fixtures.honeycomb_spec()
    mesh = rucell.fixtures.honeycomb_ruc_mesh(1)
    materials = {1: {"E": 70.0, "nu": 0.33}}
    mixed = np.array([[0.01, 0.01], [0.01, 0.0]])
    try:
        rucell.solve(mesh, spec, materials, mixed)
    except rucell.RucError as err:
        assert "inadmissible" in str(err)
    else:
        raise AssertionError("inadmissible load should raise")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"{name}: ok")
    print("python smoke tests passed")
