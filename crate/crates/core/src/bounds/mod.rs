mod closed;
mod report;
mod search;
mod table;

pub use closed::{alpha_closed, beta, delta_threshold, limit_form, nesterenko_ratio, BoundVariant};
pub(crate) use closed::check_abd;
pub use report::{
    alpha_exact, default_strict, delta_bound, growth_reference, hypothesis_check, BoundReport, HypothesisMode, HypothesisReport, MinTerm,
};
pub use search::{asymptotic_demo, best_b, closed_value_f64, search_min_params, DemoRow, SearchResult};
pub use table::{eight_decimals, printed_rows, reproduce_table, table_csv, TableRow, MATCH_TOL, PRINTED_ROWS};
