//! Demographic annotation of users: gender from first names, an age bucket
//! from a face-annotation service, a home state from geotags or the profile
//! location string, and per-state platform penetration rates.

mod age;
mod gender;
mod location;
mod penetration;
mod states;

pub use age::{
    infer_age_bucket, infer_age_buckets, AgeBucket, ClientError, FaceAnnotation, FaceAnnotationClient, StubFaceClient,
    AGE_THRESHOLD_YEARS,
};
pub use gender::{infer_gender, GenderLabel, NameDictionary, NameLabel};
pub use location::{resolve_state, resolve_user_state, resolve_user_states, Gazetteer, StateBox};
pub use penetration::{
    baseline_user_states, compute_penetration_table, read_penetration_csv, read_population_csv, write_penetration_csv,
    PenetrationTable,
};
pub use states::{StateCode, STATES};

#[derive(Debug, thiserror::Error)]
pub enum DemographicsError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("unknown state code {0:?}")]
    InvalidState(String),
    #[error("invalid name label {0:?}")]
    InvalidLabel(String),
    #[error("name dictionary is empty")]
    EmptyDictionary,
    #[error("invalid age {0} (expected 0 < age < 120)")]
    InvalidAge(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("state {0} has baseline users but no population estimate")]
    MissingPopulation(StateCode),
}
