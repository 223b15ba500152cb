//! Approximate bounding boxes, city lists and 2014 populations for the
//! states the generator places users in.

use crate::demographics::{StateBox, StateCode};

/// `(code, min_lat, min_lon, max_lat, max_lon, population, cities)`.
pub(crate) const STATE_TABLE: &[(&str, f64, f64, f64, f64, f64, &[&str])] = &[
    ("CA", 32.5, -124.4, 42.0, -114.1, 38_800_000.0, &["Los Angeles", "San Francisco", "San Diego", "Sacramento", "Oakland"]),
    ("TX", 25.8, -106.6, 36.5, -93.5, 27_000_000.0, &["Houston", "Dallas", "Austin", "San Antonio", "El Paso"]),
    ("FL", 24.5, -87.6, 31.0, -80.0, 19_900_000.0, &["Miami", "Orlando", "Tampa", "Jacksonville"]),
    ("NY", 40.5, -79.8, 45.0, -71.9, 19_700_000.0, &["New York City", "Buffalo", "Rochester", "Albany", "Brooklyn"]),
    ("IL", 37.0, -91.5, 42.5, -87.5, 12_900_000.0, &["Chicago", "Peoria", "Naperville"]),
    ("PA", 39.7, -80.5, 42.3, -74.7, 12_800_000.0, &["Philadelphia", "Pittsburgh", "Harrisburg"]),
    ("OH", 38.4, -84.8, 42.0, -80.5, 11_600_000.0, &["Columbus", "Cleveland", "Cincinnati"]),
    ("GA", 30.4, -85.6, 35.0, -80.8, 10_100_000.0, &["Atlanta", "Savannah", "Augusta"]),
    ("NJ", 38.9, -75.6, 41.35, -73.9, 8_900_000.0, &["Newark", "Jersey City", "Trenton"]),
    ("WA", 45.5, -124.8, 49.0, -116.9, 7_100_000.0, &["Seattle", "Spokane", "Tacoma"]),
    ("MA", 41.2, -73.5, 42.9, -69.9, 6_700_000.0, &["Boston", "Cambridge", "Worcester"]),
];

/// A small box around New York City that overlaps the New Jersey box; the
/// smallest containing box decides.
pub(crate) const NYC_BOX: (f64, f64, f64, f64) = (40.55, -74.05, 40.92, -73.70);

pub(crate) fn code(s: &str) -> StateCode {
    StateCode::parse(s).expect("table codes are valid")
}

pub(crate) fn boxes() -> Vec<StateBox> {
    let mut out: Vec<StateBox> = STATE_TABLE
        .iter()
        .map(|&(c, min_lat, min_lon, max_lat, max_lon, ..)| StateBox { state: code(c), min_lat, min_lon, max_lat, max_lon })
        .collect();
    let (min_lat, min_lon, max_lat, max_lon) = NYC_BOX;
    out.push(StateBox { state: code("NY"), min_lat, min_lon, max_lat, max_lon });
    out
}

pub(crate) fn cities() -> Vec<(String, StateCode)> {
    STATE_TABLE.iter().flat_map(|&(c, .., cities)| cities.iter().map(move |city| (city.to_string(), code(c)))).collect()
}
