"""Figure data emitters: series structure and schema."""
from hetcache.config import config_from_dict
from hetcache.figures import FIGURE_SCHEMAS, fig3_rows


def test_fig3_has_cached_and_no_cache_series():
    cfg = config_from_dict({})
    rows = fig3_rows(cfg, points=11)
    series = {}
    for eta, label, c_size, apt in rows:
        series.setdefault(label, []).append((eta, c_size, apt))
    assert set(series) == {"cached", "no_cache"}
    assert len(series["cached"]) == 11
    assert len(series["no_cache"]) == 11
    assert all(c == 100 for _, c, _ in series["cached"])
    assert all(c == 0 for _, c, _ in series["no_cache"])
    # both series vanish at eta = 0 (no access spectrum)
    assert series["cached"][0][2] == 0.0
    assert series["no_cache"][0][2] == 0.0


def test_schema_registry_complete():
    assert set(FIGURE_SCHEMAS) == {"fig2.csv", "fig3.csv", "fig4.csv", "fig5.csv"}
    for cols in FIGURE_SCHEMAS.values():
        assert "apt_bps_m2" in cols or "apt_star_bps_m2" in cols
