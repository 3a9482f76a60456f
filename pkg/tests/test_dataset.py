import datetime as dt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ovisat.dataset import (
    OvitrapRecord,
    Placement,
    RawSeries,
    WeeklySeries,
    Zone,
    aggregate_oviposition,
    interpolate_to_weekly,
    parse_ovitrap_records,
    parse_raw_series,
    zscore,
)
from ovisat.errors import (
    DataError,
    DuplicateDate,
    EmptyFile,
    MalformedRow,
    NoOverlap,
    ZeroVariance,
)
from ovisat.weeks import WeekGrid, week_midpoint


def write_csv(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


def raw(pairs, name="ndvi", zone=Zone.RURAL):
    return RawSeries(
        name=name,
        zone=zone,
        observations=tuple((d, float(v)) for d, v in pairs),
    )


class TestParseRawSeries:
    def test_direct_parse(self, tmp_path):
        p = write_csv(tmp_path, "a.csv", "date,value\n2012-08-01,0.45\n2012-08-17,0.52\n")
        s = parse_raw_series(p, "ndvi", Zone.RURAL)
        assert len(s.observations) == 2
        assert s.observations[0] == (dt.date(2012, 8, 1), 0.45)
        assert s.key == "ndvi:rural"

    def test_rows_out_of_order_are_sorted(self, tmp_path):
        p = write_csv(tmp_path, "a.csv", "date,value\n2012-08-17,0.52\n2012-08-01,0.45\n")
        s = parse_raw_series(p, "ndvi", Zone.RURAL)
        dates = [d for d, _ in s.observations]
        assert dates == sorted(dates)

    def test_duplicate_date_rejected(self, tmp_path):
        p = write_csv(tmp_path, "a.csv", "date,value\n2012-08-01,0.1\n2012-08-01,0.2\n")
        with pytest.raises(DuplicateDate):
            parse_raw_series(p, "ndvi", Zone.RURAL)

    def test_malformed_row_reports_line(self, tmp_path):
        p = write_csv(tmp_path, "a.csv", "date,value\n2012-08-01,0.1\nnot-a-date,0.2\n")
        with pytest.raises(MalformedRow) as exc:
            parse_raw_series(p, "ndvi", Zone.RURAL)
        assert exc.value.line_no == 3

    def test_empty_file(self, tmp_path):
        p = write_csv(tmp_path, "a.csv", "date,value\n")
        with pytest.raises(EmptyFile):
            parse_raw_series(p, "ndvi", Zone.RURAL)

    def test_zone_none_key_is_bare_name(self, tmp_path):
        p = write_csv(tmp_path, "a.csv", "date,value\n2012-08-01,1\n2012-09-01,2\n")
        assert parse_raw_series(p, "rain", Zone.NONE).key == "rain"


class TestParseOvitraps:
    def test_parse_and_validate(self, tmp_path):
        p = write_csv(
            tmp_path,
            "o.csv",
            "house_id,placement,iso_year,iso_week,egg_count\n"
            "h1,outside,2012,33,10\nh1,inside,2012,33,4\n",
        )
        recs = parse_ovitrap_records(p)
        assert recs[0] == OvitrapRecord("h1", Placement.OUTSIDE, (2012, 33), 10)

    def test_bad_placement(self, tmp_path):
        p = write_csv(
            tmp_path,
            "o.csv",
            "house_id,placement,iso_year,iso_week,egg_count\nh1,roof,2012,33,10\n",
        )
        with pytest.raises(MalformedRow):
            parse_ovitrap_records(p)

    def test_negative_count(self, tmp_path):
        p = write_csv(
            tmp_path,
            "o.csv",
            "house_id,placement,iso_year,iso_week,egg_count\nh1,outside,2012,33,-1\n",
        )
        with pytest.raises(MalformedRow):
            parse_ovitrap_records(p)


class TestInterpolateToWeekly:
    def test_midpoint_between_two_observations(self):
        # week Thursday exactly 7 days into a 14-day linear ramp
        grid = WeekGrid(2012, 32, 1)
        thursday = grid.start_midpoint
        s = raw([(thursday - dt.timedelta(days=7), 0.0),
                 (thursday + dt.timedelta(days=7), 14.0)])
        w = interpolate_to_weekly(s, grid)
        assert w.values[0] == pytest.approx(7.0, abs=1e-12)

    def test_constant_series_everywhere(self):
        grid = WeekGrid(2012, 32, 4)
        start = grid.start_midpoint
        s = raw([(start - dt.timedelta(days=3), 0.3),
                 (start + dt.timedelta(days=40), 0.3)])
        w = interpolate_to_weekly(s, grid)
        assert np.allclose(w.values, 0.3)

    def test_hand_computed_ramp(self):
        # ramp 1.0 -> 2.0 over 16 days; midpoints at days 3 and 10 from the
        # first raw date give 1 + 3/16 and 1 + 10/16
        grid = WeekGrid(2014, 10, 2)
        first_thu = grid.start_midpoint
        d0 = first_thu - dt.timedelta(days=3)
        s = raw([(d0, 1.0), (d0 + dt.timedelta(days=16), 2.0)])
        w = interpolate_to_weekly(s, grid)
        assert w.values[0] == pytest.approx(1.1875, abs=1e-12)
        assert w.values[1] == pytest.approx(1.625, abs=1e-12)

    def test_exact_at_coincident_midpoint(self):
        grid = WeekGrid(2013, 5, 3)
        mids = grid.midpoints()
        s = raw([(mids[0], 0.11), (mids[1], 0.73), (mids[2], 0.42)])
        w = interpolate_to_weekly(s, grid)
        assert np.max(np.abs(w.values - [0.11, 0.73, 0.42])) < 1e-12

    def test_outside_span_is_missing(self):
        grid = WeekGrid(2013, 5, 6)
        mids = grid.midpoints()
        s = raw([(mids[2], 1.0), (mids[3], 2.0)])
        w = interpolate_to_weekly(s, grid)
        assert np.isnan(w.values[[0, 1, 4, 5]]).all()
        assert np.isfinite(w.values[[2, 3]]).all()

    def test_disjoint_spans_raise(self):
        grid = WeekGrid(2013, 5, 2)
        s = raw([(dt.date(1999, 1, 1), 1.0), (dt.date(1999, 6, 1), 2.0)])
        with pytest.raises(NoOverlap):
            interpolate_to_weekly(s, grid)

    @given(st.lists(st.floats(-100, 100), min_size=2, max_size=8, unique=True))
    def test_values_bounded_by_bracketing_observations(self, vals):
        grid = WeekGrid(2013, 5, 10)
        start = grid.start_midpoint
        obs = [
            (start + dt.timedelta(days=11 * i - 2), v) for i, v in enumerate(vals)
        ]
        w = interpolate_to_weekly(raw(obs), grid)
        days = [d.toordinal() for d, _ in obs]
        for idx, mid in enumerate(grid.midpoints()):
            v = w.values[idx]
            if np.isnan(v):
                continue
            j = np.searchsorted(days, mid.toordinal(), side="left")
            lo_v, hi_v = (vals[j], vals[j]) if days[j] == mid.toordinal() else (
                vals[j - 1], vals[j])
            assert min(lo_v, hi_v) - 1e-9 <= v <= max(lo_v, hi_v) + 1e-9


class TestAggregateOviposition:
    def test_sums_external_only(self):
        grid = WeekGrid(2012, 33, 1)
        week = grid.week_of(0)
        records = [
            OvitrapRecord("h1", Placement.OUTSIDE, week, 10),
            OvitrapRecord("h2", Placement.OUTSIDE, week, 5),
            OvitrapRecord("h1", Placement.INSIDE, week, 99),
        ]
        out = aggregate_oviposition(records, grid)
        assert out.values[0] == 15

    def test_no_records_all_zero(self):
        grid = WeekGrid(2012, 33, 5)
        out = aggregate_oviposition([], grid)
        assert np.all(out.values == 0)

    def test_enumeration_oracle(self):
        grid = WeekGrid(2012, 33, 2)
        weeks = [grid.week_of(0), grid.week_of(1)]
        counts = list(range(1, 7))  # 3 houses x 2 weeks
        records, expected = [], np.zeros(2)
        i = 0
        for h in range(3):
            for t in range(2):
                records.append(
                    OvitrapRecord(f"h{h}", Placement.OUTSIDE, weeks[t], counts[i])
                )
                expected[t] += counts[i]
                i += 1
        out = aggregate_oviposition(records, grid)
        assert np.array_equal(out.values, expected)

    @given(st.permutations(list(range(6))))
    def test_permutation_invariant(self, order):
        grid = WeekGrid(2012, 33, 3)
        base = [
            OvitrapRecord(f"h{i}", Placement.OUTSIDE, grid.week_of(i % 3), 2 * i + 1)
            for i in range(6)
        ]
        shuffled = [base[i] for i in order]
        assert np.array_equal(
            aggregate_oviposition(base, grid).values,
            aggregate_oviposition(shuffled, grid).values,
        )

    def test_off_grid_records_dropped(self):
        grid = WeekGrid(2012, 33, 1)
        records = [OvitrapRecord("h1", Placement.OUTSIDE, (2011, 5), 50)]
        assert aggregate_oviposition(records, grid).values[0] == 0


class TestZscore:
    def grid_series(self, values):
        return WeeklySeries(
            name="x", grid=WeekGrid(2012, 33, len(values)), values=np.array(values)
        )

    def test_one_two_three(self):
        out, mean, sd = zscore(self.grid_series([1.0, 2.0, 3.0]))
        assert np.allclose(out.values, [-1.0, 0.0, 1.0], atol=1e-12)
        assert mean == pytest.approx(2.0)
        assert sd == pytest.approx(1.0)

    def test_idempotent_on_standardized(self):
        out, _, _ = zscore(self.grid_series([1.0, 2.0, 3.0]))
        out2, mean, sd = zscore(out)
        assert np.max(np.abs(out2.values - out.values)) < 1e-12

    def test_zero_variance(self):
        with pytest.raises(ZeroVariance):
            zscore(self.grid_series([5.0, 5.0, 5.0]))

    @settings(max_examples=50)
    @given(
        st.lists(
            st.floats(-1e4, 1e4),
            min_size=3,
            max_size=40,
        ).filter(lambda v: max(v) - min(v) > 1e-6)
    )
    def test_output_standardized(self, values):
        out, _, _ = zscore(self.grid_series(values))
        assert abs(np.mean(out.values)) < 1e-10
        assert abs(np.std(out.values, ddof=1) - 1.0) < 1e-10

    def test_missing_values_pass_through(self):
        s = WeeklySeries(
            name="x",
            grid=WeekGrid(2012, 33, 4),
            values=np.array([np.nan, 1.0, 2.0, 3.0]),
        )
        out, mean, sd = zscore(s)
        assert np.isnan(out.values[0])
        assert mean == pytest.approx(2.0)


class TestInvariants:
    def test_raw_series_needs_two_observations(self):
        with pytest.raises(DataError):
            raw([(dt.date(2012, 1, 1), 1.0)])

    def test_weekly_series_length_must_match_grid(self):
        with pytest.raises(DataError):
            WeeklySeries(name="x", grid=WeekGrid(2012, 1, 3), values=np.zeros(2))

    def test_negative_egg_count_rejected(self):
        with pytest.raises(DataError):
            OvitrapRecord("h", Placement.OUTSIDE, (2012, 1), -3)
