import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import spectralkit as sk
from spectralkit.errors import ConfigurationError, RecordsError, SnapshotFormatError
from spectralkit.operators import make_grid, random_field
from spectralkit.output import (
    STDOUT_LINE_RE,
    SpatialMeansRecord,
    compute_increments,
    compute_spectral_energy_budget,
    compute_spectrum,
    format_stdout_line,
    load_snapshot,
    parse_stdout_line,
    read_records,
    record_spatial_means,
    write_snapshot,
)
from spectralkit.output.ndrec import append_record, dumps_record
from spectralkit.output.phys_fields import list_snapshots, params_digest, snapshot_name
from spectralkit.solvers.ns2d import ns2d_tendency
from spectralkit.solvers.ns3d import ns3d_tendency

TWO_PI = 2 * np.pi


def saving_params(make_params, tmp_path, solver="ns2d", n_iters=10, **leaves):
    return make_params(
        solver, output__save=True, output__root_dir=str(tmp_path),
        time_stepping__stop="n_iters", time_stepping__n_iters=n_iters,
        time_stepping__fixed_dt=0.01, **leaves,
    )


class TestSpatialMeans:
    def test_cosine_energy(self, make_params):
        sim = sk.build_simulation(make_params("ns3d", n=8, init_fields__type="constant"))
        x = sim.oper.coords()[0]
        sim.state.init_statephys_from(vx=np.cos(x))
        assert record_spatial_means(sim).E == pytest.approx(0.25, rel=1e-14)

    def test_2d_cosine_energy(self, make_params):
        sim = sk.build_simulation(make_params("ns2d", n=16, init_fields__type="constant"))
        x, y = sim.oper.coords()
        # u = (cos y, 0) has vorticity sin y
        sim.state.init_statephys_from(rot=np.sin(y))
        means = record_spatial_means(sim)
        assert means.E == pytest.approx(0.25, rel=1e-14)
        assert means.Z == pytest.approx(0.25, rel=1e-14)

    def test_zero_state(self, make_params):
        sim = sk.build_simulation(make_params("ns2d", init_fields__type="constant"))
        means = record_spatial_means(sim)
        assert means.E == 0 and means.Z == 0 and means.eps_visc == 0 and means.P_forcing == 0

    def test_dissipation(self, make_params):
        sim = sk.build_simulation(make_params("ns2d", n=16, nu_2=0.1,
                                              init_fields__type="constant"))
        x, y = sim.oper.coords()
        sim.state.init_statephys_from(rot=2 * np.sin(x) * np.sin(y))
        means = record_spatial_means(sim)
        # E = 1/2 <sin^2 x cos^2 y + cos^2 x sin^2 y> = 1/4; |k|^2 = 2
        assert means.E == pytest.approx(0.25)
        assert means.eps_visc == pytest.approx(2 * 0.1 * 2 * 0.25)

    def test_ad1d_has_no_enstrophy(self, make_params):
        sim = sk.build_simulation(make_params("ad1d"))
        assert record_spatial_means(sim).Z is None

    def test_forcing_power_recorded(self, make_params):
        sim = sk.build_simulation(make_params("ns2d", forcing__enable=True,
                                              time_stepping__fixed_dt=0.01))
        means = record_spatial_means(sim)
        f = sim.forcing.last_hat
        u = sim.state.state_spect
        expected = sim.energy_inner(u, f) + 0.5 * 0.01 * sim.energy_inner(f, f)
        assert means.P_forcing == pytest.approx(expected, rel=1e-12)

    def test_record_round_trip(self):
        rec = SpatialMeansRecord(0.1, 3, 0.5, None, 1e-3, 0.0, 0.01)
        back = SpatialMeansRecord.from_dict(json.loads(dumps_record(rec.to_dict())))
        assert back == rec

    def test_nonlinear_tendency_conserves_energy(self, make_params):
        sim = sk.build_simulation(make_params("ns2d", n=32, nu_2=0.0))
        s = sim.state.state_spect
        assert abs(sim.energy_inner(s, sim.nonlin_tendency_spect())) < 1e-12 * sim.energy()


class TestSpectrum:
    def test_single_mode(self):
        g = make_grid([16], [TWO_PI])
        rec = compute_spectrum(g, g.fft(np.cos(3 * g.x_axis[0])))
        expected = np.zeros_like(rec.E)
        expected[3] = 0.25
        np.testing.assert_allclose(rec.E, expected, atol=1e-16)
        np.testing.assert_allclose(rec.k, np.arange(rec.E.size))

    def test_band_support(self):
        g = make_grid([32, 32], [TWO_PI, TWO_PI])
        rec = compute_spectrum(g, random_field(g, 1, (2, 4)))
        support = np.flatnonzero(rec.E > 0)
        assert support.min() == 2 and support.max() == 4

    @pytest.mark.parametrize("solver, n", [("ns2d", 32), ("ns3d", 16), ("ad1d", 32)])
    def test_parseval_chain(self, make_params, solver, n):
        sim = sk.build_simulation(make_params(solver, n=n))
        E = record_spatial_means(sim).E
        spec = sim.output.spectra.compute()
        u = sim.velocity_phys()
        phys = 0.5 * np.mean(np.sum(u**2, axis=0))
        assert np.sum(spec.E) * sim.oper.deltak_shells == pytest.approx(E, rel=1e-12)
        assert phys == pytest.approx(E, rel=1e-12)

    def test_anisotropic_box_shells(self):
        g = make_grid([16, 8], [TWO_PI, np.pi])
        assert g.deltak_shells == pytest.approx(1.0)
        rec = compute_spectrum(g, random_field(g, 0, (1, 6), ncomp=2))
        assert np.sum(rec.E) * g.deltak_shells == pytest.approx(0.5, rel=1e-12)


class TestBudget:
    @pytest.mark.parametrize("seed", range(3))
    def test_transfer_sums_to_zero_2d(self, seed):
        g = make_grid([32, 32], [TWO_PI, TWO_PI])
        from spectralkit.operators import velocity_from_vorticity2d

        rot = random_field(g, seed, (1, 8))
        vel = velocity_from_vorticity2d(g, rot)
        tend = velocity_from_vorticity2d(g, ns2d_tendency(g, rot))
        rec = compute_spectral_energy_budget(g, vel, tend, 0.0)
        assert abs(rec.T.sum()) <= 1e-10 * np.abs(rec.T).sum()

    def test_transfer_sums_to_zero_3d(self):
        g = make_grid([16, 16, 16], [TWO_PI] * 3)
        from spectralkit.operators import project_divfree

        v = random_field(g, 2, (1, 5), ncomp=3)
        project_divfree(g, v)
        rec = compute_spectral_energy_budget(g, v, ns3d_tendency(g, v), 0.0)
        assert abs(rec.T.sum()) <= 1e-10 * np.abs(rec.T).sum()

    def test_zero_state(self):
        g = make_grid([8, 8], [TWO_PI, TWO_PI])
        rec = compute_spectral_energy_budget(g, g.zeros_spect(2), g.zeros_spect(2), 0.1)
        assert not rec.T.any() and not rec.D.any()

    def test_beltrami_no_transfer(self):
        g = make_grid([16, 16, 16], [TWO_PI] * 3)
        x, y, z = g.coords()
        v = g.fft(np.stack([np.sin(z) + np.cos(y), np.sin(x) + np.cos(z),
                            np.sin(y) + np.cos(x)]))
        rec = compute_spectral_energy_budget(g, v, ns3d_tendency(g, v), 0.01)
        assert np.abs(rec.T).max() < 1e-13
        # D = -nu |k|^2 <|u|^2> = -0.01 * 1 * 3
        assert rec.D.sum() == pytest.approx(-0.03)

    def test_dissipation_matches_means(self, make_params):
        sim = sk.build_simulation(make_params("ns2d", nu_2=0.05))
        rec = sim.output.spect_energy_budg.compute()
        assert rec.D.sum() == pytest.approx(-record_spatial_means(sim).eps_visc, rel=1e-12)


class TestIncrements:
    def test_sine_second_order(self):
        g = make_grid([64], [TWO_PI])
        rec = compute_increments(g, np.sin(g.x_axis[0]), orders=[2])
        np.testing.assert_allclose(rec.S[2.0][0], 1 - np.cos(rec.r[0]), atol=1e-14)
        assert rec.r[0][32] == pytest.approx(np.pi)
        assert rec.S[2.0][0][32] == pytest.approx(2.0)

    def test_zero_separation_and_constant(self, rng):
        g = make_grid([16, 16], [TWO_PI, TWO_PI])
        rec = compute_increments(g, rng.standard_normal((2, 16, 16)))
        for S in rec.S.values():
            assert not S[:, 0].any()
        const = compute_increments(g, np.full((16, 16), 2.5))
        for S in const.S.values():
            assert not S.any()

    def test_s2_nonnegative(self, rng):
        g = make_grid([16, 16], [TWO_PI, TWO_PI])
        rec = compute_increments(g, rng.standard_normal((2, 16, 16)), orders=[2, 3, 2.5])
        assert (rec.S[2.0] >= 0).all() and (rec.S[2.5] >= 0).all()

    def test_longitudinal_components(self):
        g = make_grid([16, 16], [TWO_PI, TWO_PI])
        x, y = g.coords()
        rec = compute_increments(g, np.stack([np.sin(x), np.zeros_like(y)]), orders=[2])
        assert rec.S[2.0][0].max() > 1.0
        assert not rec.S[2.0][1].any()

    def test_invalid_order(self):
        g = make_grid([8], [TWO_PI])
        with pytest.raises(ConfigurationError):
            compute_increments(g, np.zeros(8), orders=[0.5])

    def test_record_round_trip(self, rng):
        g = make_grid([8, 8], [TWO_PI, TWO_PI])
        from spectralkit.output import IncrementsRecord

        rec = compute_increments(g, rng.standard_normal((2, 8, 8)), t=0.5, it=3)
        back = IncrementsRecord.from_dict(json.loads(dumps_record(rec.to_dict())))
        assert back.t == 0.5 and back.it == 3
        for p in rec.S:
            np.testing.assert_array_equal(back.S[p], rec.S[p])


class TestSnapshots:
    def test_round_trip_bit_identical(self, tmp_path, rng):
        fields = {"vx": rng.standard_normal((8, 6, 4)), "vy": rng.standard_normal((8, 6, 4))}
        path = write_snapshot(tmp_path / "a.fld", fields, 0.25, 7, "ns3d", "abc")
        header, back = load_snapshot(path)
        assert header["time"] == 0.25 and header["it"] == 7
        assert header["names"] == ["vx", "vy"] and header["shape"] == [8, 6, 4]
        for key in fields:
            assert back[key].tobytes() == fields[key].tobytes()

    def test_header_is_text(self, tmp_path):
        path = write_snapshot(tmp_path / "a.fld", {"u": np.zeros(8)}, 0.0, 0, "ad1d", "d")
        head = path.read_bytes().split(b"\n\n")[0].decode()
        assert head.splitlines()[0] == 'magic = "spectralkit-fld"'
        assert 'dtype = "<f8"' in head

    def test_truncated(self, tmp_path, rng):
        path = write_snapshot(tmp_path / "a.fld", {"u": rng.standard_normal(16)}, 0.0, 0, "x", "d")
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(SnapshotFormatError, match="payload length"):
            load_snapshot(path)

    @pytest.mark.parametrize("data", [b"garbage", b"magic = \"other\"\n\n", b"a = {\n\n"])
    def test_corrupt_header(self, tmp_path, data):
        path = tmp_path / "bad.fld"
        path.write_bytes(data)
        with pytest.raises(SnapshotFormatError):
            load_snapshot(path)

    def test_name(self):
        assert snapshot_name(0.5) == "state_phys_t0000.500000.fld"

    def test_digest_depends_on_grid_only(self, make_params):
        a = make_params("ns2d")
        b = make_params("ns2d", nu_2=0.5)
        c = make_params("ns2d", oper__nx=32)
        assert params_digest(a) == params_digest(b) != params_digest(c)

    def test_saved_by_run(self, make_params, tmp_path):
        sim = sk.build_simulation(saving_params(make_params, tmp_path, output__period_save=0.03))
        sim.time_stepping.start()
        times = [t for t, _ in list_snapshots(sim.output.path)]
        np.testing.assert_allclose(times, [0.0, 0.03, 0.06, 0.09, 0.1], atol=1e-12)
        header, fields = load_snapshot(list_snapshots(sim.output.path)[-1][1])
        assert fields["rot"].tobytes() == sim.state.state_phys[0].tobytes()


class TestStdout:
    def test_round_trip(self):
        line = format_stdout_line(12, 0.1 + 0.2, 1e-3, 0.123456789, 3.5, 0.25)
        parsed = parse_stdout_line(line)
        assert parsed == {"it": 12, "t": 0.1 + 0.2, "dt": 1e-3, "E": 0.123456789,
                          "Z": 3.5, "walltime": 0.25}
        assert STDOUT_LINE_RE.match(line)

    def test_without_enstrophy(self):
        parsed = parse_stdout_line(format_stdout_line(0, 0.0, 0.1, 1.0, None, 0.0))
        assert parsed["Z"] is None

    def test_not_a_line(self):
        with pytest.raises(ValueError):
            parse_stdout_line("hello")

    def test_trivial_energy_constant(self, make_params, capsys):
        params = make_params("trivial", output__period_print=2,
                             time_stepping__stop="n_iters", time_stepping__n_iters=10)
        sim = sk.build_simulation(params)
        sim.time_stepping.start()
        energies = [parse_stdout_line(l)["E"] for l in sim.output.lines]
        assert len(energies) == 6  # it = 0, 2, 4, 6, 8 and the final state
        assert len(set(energies)) == 1
        assert capsys.readouterr().out.count("it=") == 6

    def test_decaying_run_non_increasing(self, make_params):
        params = make_params("ns2d", nu_2=0.05, output__period_print=1,
                             time_stepping__stop="n_iters", time_stepping__n_iters=20)
        sim = sk.build_simulation(params)
        sim.time_stepping.start()
        energies = [parse_stdout_line(l)["E"] for l in sim.output.lines]
        assert all(b <= a for a, b in zip(energies, energies[1:]))


class TestRecords:
    def test_append_and_read(self, tmp_path):
        path = tmp_path / "s.ndrec"
        append_record(path, {"t": 0.1, "it": 1, "a": np.arange(3.0)})
        append_record(path, {"t": 0.2, "it": 2, "a": np.float64(0.1)})
        recs = read_records(path)
        assert recs == [{"t": 0.1, "it": 1, "a": [0.0, 1.0, 2.0]}, {"t": 0.2, "it": 2, "a": 0.1}]

    def test_missing_and_malformed(self, tmp_path):
        with pytest.raises(RecordsError):
            read_records(tmp_path / "none.ndrec")
        bad = tmp_path / "bad.ndrec"
        bad.write_text('{"t": 0}\n{oops\n')
        with pytest.raises(RecordsError, match=":2:"):
            read_records(bad)

    def test_directory_layout(self, make_params, tmp_path):
        sim = sk.build_simulation(saving_params(make_params, tmp_path))
        sim.time_stepping.start()
        path = sim.output.path
        assert path.name.startswith("ns2d_16x16_")
        for name in ("params.txt", "info_solver.txt", "spatial_means.ndrec", "spectra.ndrec",
                     "spect_energy_budg.ndrec", "increments.ndrec", "run.log"):
            assert (path / name).exists(), name
        assert list((path / "snapshots").glob("state_phys_t*.fld"))
        assert sk.deserialize((path / "params.txt").read_text()) == sim.params

    def test_streams_self_describing_and_monotone(self, make_params, tmp_path):
        sim = sk.build_simulation(saving_params(make_params, tmp_path,
                                                output__period_save=0.02))
        sim.time_stepping.start()
        for name in ("spatial_means", "spectra", "spect_energy_budg", "increments"):
            recs = read_records(sim.output.path / f"{name}.ndrec")
            times = [r["t"] for r in recs]
            assert all(b > a for a, b in zip(times, times[1:]))
            assert all("it" in r for r in recs)

    def test_loaded_records(self, make_params, tmp_path):
        sim = sk.build_simulation(saving_params(make_params, tmp_path))
        sim.time_stepping.start()
        means = sim.output.spatial_means.load()
        assert means[-1].t == pytest.approx(0.1) and means[-1].it == 10
        assert np.isfinite([m.E for m in means]).all()
        spectra = sim.output.spectra.load()
        assert spectra[-1].E.shape == spectra[-1].k.shape

    def test_directory_collision(self, make_params, tmp_path):
        a = sk.build_simulation(saving_params(make_params, tmp_path))
        b = sk.build_simulation(saving_params(make_params, tmp_path))
        assert a.output.path != b.output.path

    def test_disabled_streams(self, make_params, tmp_path):
        sim = sk.build_simulation(saving_params(make_params, tmp_path,
                                                output__spectra__enable=False))
        sim.time_stepping.start()
        assert not (sim.output.path / "spectra.ndrec").exists()


_finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), _finite, _finite, _finite, st.one_of(st.none(), _finite),
       st.floats(0, 1e6))
def test_stdout_round_trip_property(it, t, dt, E, Z, wall):
    parsed = parse_stdout_line(format_stdout_line(it, t, dt, E, Z, wall))
    assert parsed["it"] == it and parsed["t"] == t and parsed["dt"] == dt
    assert parsed["E"] == E and parsed["Z"] == Z and parsed["walltime"] == wall


@settings(max_examples=50, deadline=None)
@given(st.lists(_finite, min_size=1, max_size=20))
def test_ndrec_bit_exact_property(values):
    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "x.ndrec"
        append_record(path, {"t": 0.0, "it": 0, "v": values})
        back = read_records(path)[0]["v"]
    assert [float(v).hex() for v in back] == [float(v).hex() for v in values]
