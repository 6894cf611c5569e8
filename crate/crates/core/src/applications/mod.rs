//! Scenario drivers: each builds a domain graph, runs the solvers, and
//! reports a domain metric as structured data, a CSV table, and long-format
//! plot data (`series,x,y` rows).

mod antenna;
mod lossnet;
mod market;
mod schedule;
mod siteplan;

pub use antenna::{antenna_plan, AntennaPlan, AntennaProblem};
pub use lossnet::{blocking_probabilities, route_interaction_graph, LossReport, RouteResult, RouteSet};
pub use market::{market_graph, CorrelationMode, MarketGraph, ReturnsMatrix};
pub use schedule::{schedule_tasks, Schedule, TaskSet};
pub use siteplan::{
    maximal_set_probability_greedy, next_store_selection, Normalization, PlanEntry, PlanProbability, SiteMode, SitePlan,
    SitePlanProblem, SiteScore,
};

/// Render rows as CSV with a header line.
pub(crate) fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory CSV");
    for row in rows {
        w.write_record(&row).expect("in-memory CSV");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("CSV is UTF-8")
}

/// Long-format plot data: one `series,x,y` row per point.
pub(crate) fn plot_rows(points: impl IntoIterator<Item = (String, f64, f64)>) -> String {
    csv_table(
        &["series", "x", "y"],
        points.into_iter().map(|(s, x, y)| vec![s, x.to_string(), y.to_string()]),
    )
}
