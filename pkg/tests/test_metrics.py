import dataclasses
import math

import numpy as np
import pytest
from scipy.stats import binomtest

from mmwv2v.antenna import AntennaConfig
from mmwv2v.channel import ChannelParams, path_loss
from mmwv2v.exceptions import InvalidArgument
from mmwv2v.mac import MacConfig, form_cluster
from mmwv2v.metrics import (
    MetricAccumulator,
    default_kappa_grid,
    default_theta_grid,
    evaluate_snapshot,
    rate_of,
    sinr_for_rate,
    wilson_interval,
)
from mmwv2v.road import RoadConfig

from conftest import make_snapshot
from oracles import (
    FROZEN_SINR_4P6GBPS,
    FROZEN_SINR_9GBPS,
    oracle_sinr_all_members,
    regularized_lower_gamma,
)

IDEAL45 = AntennaConfig.from_beamwidth_deg(45.0, sidelobe_rel_db=None)
SIDE45 = AntennaConfig.from_beamwidth_deg(45.0)
CH = ChannelParams()
ROAD = RoadConfig(road_length=4_000.0)


def _cluster_scene(rows):
    snap = make_snapshot([(0, 2, 0.0, "car", "rx", 0)] + rows, ROAD)
    rx = snap.vehicle_by_id(0)
    return snap, rx


def _evaluated(rows, antenna=SIDE45, pinned=None, rng=None):
    snap, rx = _cluster_scene(rows)
    cluster = form_cluster(rx, snap, MacConfig(), CH, antenna)
    return evaluate_snapshot(rx, cluster, snap, CH, antenna, rng, pinned_fading=pinned)


class TestSinrFormula:
    def test_matches_reference_arithmetic_with_interference(self):
        # two members ahead, one aligned far interferer, one blocked tx, and a
        # misaligned tx: every SINR term gets exercised
        rows = [
            (1, 2, 40.0, "car", "tx", 4),
            (2, 3, 80.0, "car", "tx", 4),
            (3, 2, 150.0, "car", "tx", 4),
            (4, 2, 210.0, "car", "tx", 4),
            (5, 2, 180.0, "truck"),
            (6, 1, 60.0, "car", "tx", 0),
        ]
        pinned = {1: 2.3, 2: 0.4, 3: 1.7, 4: 5.0, 6: 0.9}
        res, samples = _evaluated(rows, pinned=pinned)
        assert {m.vehicle_id for m in res.members} == {1, 2}

        vehicles = [dict(id=0, lane=2, x=0.0, kind="car", mode="rx", boresight=0)] + [
            dict(id=r[0], lane=r[1], x=r[2], kind=r[3] if len(r) > 3 else "car",
                 mode=r[4] if len(r) > 4 else "tx", boresight=r[5] if len(r) > 5 else 0)
            for r in rows
        ]
        want = oracle_sinr_all_members(
            vehicles, 0, [1, 2], pinned,
            road_length=ROAD.road_length, lane_width=ROAD.lane_width,
            truck_length=ROAD.truck_length, truck_width=ROAD.truck_width,
            psi=SIDE45.beamwidth, g_main=SIDE45.mainlobe_gain, g_side=SIDE45.sidelobe_gain,
            c_gain=CH.pathloss_intercept, alpha=CH.pathloss_exponent,
            sigma=CH.normalized_noise,
        )
        for m in res.members:
            assert m.sinr == pytest.approx(want[m.vehicle_id], rel=1e-12)

    def test_single_member_without_interferers_is_noise_limited(self):
        res, samples = _evaluated([(1, 2, 50.0, "car", "tx", 4)], antenna=IDEAL45,
                                  pinned={1: 1.5})
        expected = 1.5 * IDEAL45.mainlobe_gain ** 2 * path_loss(50.0, CH) / CH.normalized_noise
        assert res.members[0].sinr == pytest.approx(expected, rel=1e-12)
        assert res.interference == 0.0
        assert res.noise == pytest.approx(CH.normalized_noise, rel=1e-12)
        assert samples[0].fading == 1.5
        assert samples[0].distance == pytest.approx(50.0)

    def test_all_members_share_the_slot_interference(self):
        rows = [
            (1, 2, 40.0, "car", "tx", 4),
            (2, 2, 70.0, "car", "tx", 4),
            (3, 2, 400.0, "car", "tx", 4),
        ]
        pinned = {1: 1.0, 2: 1.0, 3: 4.0}
        res, _ = _evaluated(rows, pinned=pinned)
        assert len(res.members) == 2
        denom = res.noise + res.interference
        for m in res.members:
            k = [x.vehicle_id for x in res.members].index(m.vehicle_id)
            num = (pinned[m.vehicle_id] * res.geometry.member_gains[k]
                   * path_loss(res.geometry.member_distances[k], CH))
            assert m.sinr == pytest.approx(num / denom, rel=1e-12)

    def test_removing_an_interferer_raises_every_sinr(self):
        rows_with = [
            (1, 2, 40.0, "car", "tx", 4),
            (2, 3, 60.0, "car", "tx", 4),
            (3, 2, 300.0, "car", "tx", 4),
        ]
        pinned = {1: 1.1, 2: 0.8, 3: 2.0}
        with_interf, _ = _evaluated(rows_with, pinned=pinned)
        without, _ = _evaluated(rows_with[:2], pinned=pinned)
        for a, b in zip(with_interf.members, without.members):
            assert a.vehicle_id == b.vehicle_id
            assert b.sinr > a.sinr

    def test_mismatched_receiver_rejected(self, rng):
        snap, rx = _cluster_scene([(1, 2, 40.0, "car", "tx", 4)])
        cluster = form_cluster(rx, snap, MacConfig(), CH, SIDE45)
        other = snap.vehicle_by_id(1)
        with pytest.raises(InvalidArgument):
            evaluate_snapshot(other, cluster, snap, CH, SIDE45, rng)

    def test_missing_pinned_id_rejected(self):
        with pytest.raises(InvalidArgument, match="pinned"):
            _evaluated([(1, 2, 40.0, "car", "tx", 4)], pinned={})

    def test_no_stream_and_no_pins_rejected(self):
        with pytest.raises(InvalidArgument):
            _evaluated([(1, 2, 40.0, "car", "tx", 4)])

    def test_best_and_worst_pick_extremes(self):
        rows = [(1, 2, 30.0, "car", "tx", 4), (2, 2, 90.0, "car", "tx", 4)]
        res, _ = _evaluated(rows, pinned={1: 1.0, 2: 1.0})
        assert res.best_member.vehicle_id == 1
        assert res.worst_member.vehicle_id == 2
        assert res.best_member.sinr > res.worst_member.sinr


class TestRates:
    def test_frozen_rate_thresholds(self):
        w = 2.16e9
        assert rate_of(FROZEN_SINR_9GBPS, w) == pytest.approx(9e9, rel=1e-12)
        assert rate_of(FROZEN_SINR_4P6GBPS, w) == pytest.approx(4.6e9, rel=1e-12)

    def test_unit_sinr_gives_bandwidth(self):
        assert rate_of(1.0, 2.16e9) == pytest.approx(2.16e9, rel=1e-12)

    def test_round_trip_with_inverse(self):
        w = 2.16e9
        for rate in (1e9, 4.6e9, 9e9):
            assert rate_of(sinr_for_rate(rate, w), w) == pytest.approx(rate, rel=1e-12)

    def test_subslot_division(self):
        assert rate_of(1.0, 2.16e9, num_subslots=32) == pytest.approx(2.16e9 / 32, rel=1e-12)

    def test_invalid_inputs_rejected(self):
        with pytest.raises(InvalidArgument):
            rate_of(1.0, 0.0)
        with pytest.raises(InvalidArgument):
            rate_of(-0.5, 1e9)
        with pytest.raises(InvalidArgument):
            rate_of(1.0, 1e9, num_subslots=0)


class TestGrids:
    def test_theta_grid_shape_and_range(self):
        g = default_theta_grid()
        assert len(g) == 41
        assert g[0] == pytest.approx(0.1, rel=1e-12)
        assert g[-1] == pytest.approx(1_000.0, rel=1e-12)
        assert np.all(np.diff(np.log(g)) > 0)

    def test_kappa_grid_hits_reference_rates_exactly(self):
        g = default_kappa_grid()
        assert len(g) == 47
        assert g[0] == 0.5e9
        assert g[-1] == 12.0e9
        assert 3.0e9 in g
        assert 4.5e9 in g
        assert 4.6e9 not in g


class TestWilson:
    def test_edge_counts(self):
        lo, hi = wilson_interval(0, 50)
        assert lo == 0.0 and 0.0 < hi < 0.15
        lo, hi = wilson_interval(50, 50)
        assert hi == 1.0 and 0.85 < lo < 1.0

    def test_zero_trials_is_nan(self):
        lo, hi = wilson_interval(0, 0)
        assert math.isnan(lo) and math.isnan(hi)

    def test_contains_point_estimate(self):
        for k, n in ((3, 10), (17, 40), (499, 1000)):
            lo, hi = wilson_interval(k, n)
            assert lo <= k / n <= hi

    def test_matches_scipy_wilson(self):
        for k, n in ((0, 20), (7, 33), (150, 400), (400, 400)):
            lo, hi = wilson_interval(k, n)
            ci = binomtest(k, n).proportion_ci(confidence_level=0.95, method="wilson")
            assert lo == pytest.approx(ci.low, abs=1e-12)
            assert hi == pytest.approx(ci.high, abs=1e-12)


def _fake_result(sinrs, template):
    members = tuple(
        dataclasses.replace(m, sinr=s) for m, s in zip(template.members, sinrs)
    )
    return dataclasses.replace(template, members=members, interference=0.0, noise=1.0)


class TestAccumulator:
    @pytest.fixture()
    def two_member_template(self):
        rows = [(1, 2, 30.0, "car", "tx", 4), (2, 2, 90.0, "car", "tx", 4)]
        res, _ = _evaluated(rows, pinned={1: 1.0, 2: 1.0})
        return res

    def test_single_slot_outage_is_a_step_function(self, two_member_template):
        acc = MetricAccumulator()
        res = _fake_result([50.0, 0.2], two_member_template)
        acc.record(res)
        grid, est, lo, hi = acc.curve("M", "theta")
        assert np.array_equal(est, (grid > 50.0).astype(float))
        _, est_m, _, _ = acc.curve("m", "theta")
        assert np.array_equal(est_m, (grid > 0.2).astype(float))

    def test_rate_coverage_counts_rates_at_or_above_kappa(self, two_member_template):
        w = 2.16e9
        acc = MetricAccumulator(bandwidth=w)
        # mid-bin rates so float rounding cannot flip a grid point
        res = _fake_result([sinr_for_rate(9.1e9, w), sinr_for_rate(4.6e9, w)],
                           two_member_template)
        acc.record(res)
        grid, est, _, _ = acc.curve("M", "kappa")
        assert np.array_equal(est, (grid <= 9e9).astype(float))
        _, est_m, _, _ = acc.curve("m", "kappa")
        # worst member sits at 4.6 Gb/s, between the 4.5 and 4.75 knots
        assert np.array_equal(est_m, (grid <= 4.5e9).astype(float))

    def test_recording_twice_doubles_counts_keeps_estimates(self, two_member_template):
        res = _fake_result([3.0, 0.7], two_member_template)
        acc = MetricAccumulator()
        acc.record(res)
        one = acc.curve("M", "theta")[1].copy()
        acc.record(res)
        assert acc.n_effective == 2
        assert np.array_equal(acc.curve("M", "theta")[1], one)

    def test_monotone_curves(self, two_member_template, rng):
        acc = MetricAccumulator()
        for _ in range(200):
            acc.record(_fake_result(list(rng.lognormal(1.0, 2.0, size=2)), two_member_template))
        for member in ("M", "m"):
            _, outage, _, _ = acc.curve(member, "theta")
            assert np.all(np.diff(outage) >= 0)
            _, cover, _, _ = acc.curve(member, "kappa")
            assert np.all(np.diff(cover) <= 0)

    def test_best_dominates_worst_pointwise(self, two_member_template, rng):
        acc = MetricAccumulator()
        for _ in range(200):
            acc.record(_fake_result(list(rng.lognormal(1.0, 2.0, size=2)), two_member_template))
        assert np.all(acc.curve("M", "theta")[1] <= acc.curve("m", "theta")[1])
        assert np.all(acc.curve("M", "kappa")[1] >= acc.curve("m", "kappa")[1])

    def test_merge_equals_sequential(self, two_member_template, rng):
        draws = [list(rng.lognormal(0.5, 1.5, size=2)) for _ in range(60)]
        seq = MetricAccumulator()
        for d in draws:
            seq.record(_fake_result(d, two_member_template))
        left = MetricAccumulator()
        right = MetricAccumulator()
        for d in draws[:25]:
            left.record(_fake_result(d, two_member_template))
        for d in draws[25:]:
            right.record(_fake_result(d, two_member_template))
        left.merge(right)
        assert left.n_effective == seq.n_effective
        for member in ("M", "m"):
            for kind in ("theta", "kappa"):
                assert np.array_equal(left.curve(member, kind)[1], seq.curve(member, kind)[1])

    def test_merge_rejects_different_settings(self):
        a = MetricAccumulator()
        b = MetricAccumulator(bandwidth=1e9)
        with pytest.raises(InvalidArgument):
            a.merge(b)

    def test_empty_slots_are_skipped_by_default(self, two_member_template):
        acc = MetricAccumulator()
        acc.record_unserved()
        acc.record(_fake_result([1.0, 1.0], two_member_template))
        assert acc.n_offered == 2
        assert acc.n_effective == 1
        assert acc.n_empty == 1

    def test_empty_as_outage_counts_failures_everywhere(self):
        acc = MetricAccumulator(empty_as_outage=True)
        acc.record_unserved()
        assert acc.n_effective == 1
        _, outage, _, _ = acc.curve("M", "theta")
        assert np.all(outage == 1.0)
        _, cover, _, _ = acc.curve("m", "kappa")
        assert np.all(cover == 0.0)

    def test_unevaluated_cluster_rejected(self, two_member_template):
        acc = MetricAccumulator()
        bare = dataclasses.replace(
            two_member_template,
            members=tuple(dataclasses.replace(m, sinr=None) for m in two_member_template.members),
        )
        with pytest.raises(InvalidArgument):
            acc.record(bare)

    def test_invalid_curve_requests_rejected(self):
        acc = MetricAccumulator()
        with pytest.raises(InvalidArgument):
            acc.curve("best", "theta")
        with pytest.raises(InvalidArgument):
            acc.curve("M", "rates")


class TestDistributionRecovery:
    def test_noise_limited_outage_matches_gamma_law(self, rng):
        # single member, no interference: SINR = h^2 * const with h^2 drawn
        # from the fading law, so P_T(theta) is the Gamma CDF on a known scale
        rows = [(1, 2, 50.0, "car", "tx", 4)]
        snap, rx = _cluster_scene(rows)
        cluster = form_cluster(rx, snap, MacConfig(), CH, IDEAL45)
        const = (IDEAL45.mainlobe_gain ** 2 * path_loss(50.0, CH)) / CH.normalized_noise

        n = 10_000
        acc = MetricAccumulator()
        for _ in range(n):
            res, _ = evaluate_snapshot(rx, cluster, snap, CH, IDEAL45, rng)
            acc.record(res)

        grid, est, lo, hi = acc.curve("M", "theta")
        truth = np.array([regularized_lower_gamma(3.0, t / const) for t in grid])
        inside = (truth >= lo) & (truth <= hi)
        assert inside.mean() >= 0.85
        assert np.max(np.abs(est - truth)) < 0.02
