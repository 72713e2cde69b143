"""End-to-end smoke tests for the python bindings."""

import math

import pytest

import hiersynth as hs


def test_gate_algebra():
    h = hs.gate_h()
    s = hs.gate_s()
    assert hs.trace_distance(h, h) < 1e-7
    assert hs.trace_distance(hs.compose(h, hs.adjoint(h)), hs.identity_gate()) < 1e-7
    # S = Rz(pi/2) up to the projective sign convention.
    assert hs.trace_distance(s, hs.rz(math.pi / 2)) < 1e-7
    parsed = hs.parse_gate("H S H")
    assert hs.trace_distance(parsed, hs.compose(hs.compose(h, s), h)) < 1e-7
    rng = hs.Rng(1)
    g = hs.haar_random_gate(rng)
    assert abs(g.w**2 + g.x**2 + g.y**2 + g.z**2 - 1.0) < 1e-12
    assert "GateElement" in repr(g)


def test_database_generate_grow_save_load(tmp_path):
    gates = hs.build_gate_set(hs.GateSetSpec.set_k(1))
    model = hs.CostModel.catalyst_direct(3)
    db = hs.SequenceDatabase.generate(gates, model, 3.0)
    assert db.watermark() == 3.0
    assert len(db) > 24

    stepped = hs.SequenceDatabase(gates, model)
    stepped.grow(2.0)
    stepped.grow(3.0)
    assert len(stepped) == len(db)

    path = str(tmp_path / "db.hsdb")
    db.save(path)
    back = hs.SequenceDatabase.load(path)
    assert len(back) == len(db)
    assert back.watermark() == db.watermark()
    assert back.node(10).cost == db.node(10).cost

    labels = [gates.gates[i].label for i in db.decode_sequence(30)]
    assert labels
    assert hs.trace_distance(db.recompose(30), db.node(30).combined) < 1e-7


def test_synthesis_and_verify():
    gates = hs.build_gate_set(hs.GateSetSpec.set_k(2))
    db = hs.SequenceDatabase(gates, hs.CostModel.catalyst_magic(4))
    synth = hs.Synthesizer(db, hs.GrowthPolicy(increment=1.0, ceiling=8.0))
    target = hs.rz(0.71)
    res = synth.synthesize(target, 0.05)
    assert res.achieved_error <= 0.05
    assert res.cost >= 0.0
    assert len(res.gate_ids) == len(res.gate_labels)

    report = hs.verify(db, res, target)
    assert report.pass_

    scanned = hs.scan_synthesize(db, target, 0.05)
    assert scanned is not None
    assert scanned.node_id == res.node_id
    assert scanned.cost == pytest.approx(res.cost, abs=1e-12)

    # An impossible accuracy under a tight ceiling raises instead of looping.
    with pytest.raises(RuntimeError):
        synth.synthesize(hs.rz(math.pi / 1024), 1e-9)


def test_proportion_model():
    params = hs.ProportionParams(max_order=4, costs=[1.0, 3.0], max_cost=9.0)
    result = hs.proportions(params)
    assert result.p[3] + result.p[4] == pytest.approx(1.0, abs=1e-12)
    assert result.p[3] > result.p[4] > 0.0
    assert result.log_total_configs > 0.0

    with pytest.raises(ArithmeticError):
        hs.proportions(hs.ProportionParams(max_order=4, costs=[5.0, 9.0], max_cost=1.0))


def test_experiment_and_fit():
    spec = hs.ExperimentSpec()
    spec.set_spec = hs.GateSetSpec.set_k(2)
    spec.cost_model = hs.CostModel.catalyst_magic(4)
    spec.epsilons = [0.1, 0.05]
    spec.target_count = 20
    spec.seed = 9
    spec.growth_ceiling = 30.0
    table = hs.run_experiment(spec)
    assert [row.epsilon for row in table.rows] == [0.1, 0.05]
    assert table.rows[1].mean_cost >= table.rows[0].mean_cost
    assert not table.partial
    assert hs.table_from_json(table.to_json()).target_hash == table.target_hash

    points = [(math.log10(1.0 / row.epsilon), row.mean_cost) for row in table.rows]
    points.append((2.0, 2.0 * points[1][1] - points[0][1]))  # third point for the fit
    fit = hs.ols_fit(points)
    assert fit.n == 3
    assert '"slope"' in hs.fit_to_json(fit)
    assert hs.student_t_critical(0.95, 10) == pytest.approx(2.2281388519649385)


def test_error_translation(tmp_path):
    with pytest.raises(ValueError):
        hs.GateSetSpec.set_k(9)
    with pytest.raises(OSError):
        hs.SequenceDatabase.load(str(tmp_path / "missing.hsdb"))
    bad = tmp_path / "bad.hsdb"
    bad.write_bytes(b"not a database")
    with pytest.raises(ValueError):
        hs.SequenceDatabase.load(str(bad))
