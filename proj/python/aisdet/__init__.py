"""AIS-based GNSS interference detection pipeline (C++ core bindings)."""

from _aisdet import (  # noqa: F401
    __version__,
    default_config_json,
    evaluate,
    generate_scenario,
    geodesic_distance,
    jamming_threshold,
    run_pipeline,
    st_dbscan,
)
