"""CLI invocations with checked-in expected output, keyed by golden file name."""

CASES = {
    "iterate_a05_k3.svg": ["iterate", "--a", "0.5", "--k", "3"],
    "iterate_k2.json": ["iterate", "--k", "2", "--format", "json"],
    "iterate_k3.csv": ["iterate", "--k", "3", "--format", "csv"],
    "curve_n8.csv": ["curve", "--samples", "8"],
    "curve_n4.json": ["curve", "--samples", "4", "--format", "json", "--a", "0.4"],
    "curve_n16.svg": ["curve", "--samples", "16", "--format", "svg"],
    "contacts_k4.csv": ["contacts", "--k", "4"],
    "contacts_k3.json": ["contacts", "--k", "3", "--format", "json", "--a", "0.7"],
    "contacts_k6.svg": ["contacts", "--k", "6", "--format", "svg"],
    "dim_delta.json": ["dim", "--a-complement", "1e-16", "--format", "json"],
    "dim.csv": ["dim", "--format", "csv", "--a", "0.3"],
    "dim_plot_n5.csv": ["dim-plot", "--n", "5"],
    "dim_plot_n21.svg": ["dim-plot", "--n", "21", "--format", "svg"],
    "dim_plot_n3.json": ["dim-plot", "--n", "3", "--format", "json"],
    "dim_max_check.json": ["dim-max-check"],
    "area.json": ["area"],
    "area.csv": ["area", "--format", "csv", "--a", "0.5"],
    "area_empirical_k8.json": ["area-empirical", "--k", "8"],
    "boxdim_k14.json": ["boxdim", "--k", "14", "--a", "0.5"],
    "koch_compare_k2.json": ["koch-compare", "--k", "2"],
    "ifs_verify_k8.json": ["ifs-verify", "--k", "8", "--a", "0.5"],
    "simple_check_k6.json": ["simple-check", "--k", "6"],
}
