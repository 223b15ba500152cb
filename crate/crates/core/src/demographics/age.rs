//! Age buckets from profile-picture face annotations.

use std::collections::HashMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::DemographicsError;
use crate::corpus::UserProfile;

pub const AGE_THRESHOLD_YEARS: f64 = 24.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum AgeBucket {
    Under24,
    AtLeast24,
    Unknown,
}

/// A detected face. `age_estimate` is `None` when the service found a face
/// but returned no age.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaceAnnotation {
    pub age_estimate: Option<f64>,
}

impl FaceAnnotation {
    pub fn with_age(age: f64) -> Result<Self, DemographicsError> {
        if !(age > 0.0 && age < 120.0) {
            return Err(DemographicsError::InvalidAge(age));
        }
        Ok(Self { age_estimate: Some(age) })
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ClientError {
    #[error("face client transport failure: {0}")]
    Transport(String),
}

/// Face annotation service. `Ok(None)` means no face was detected.
pub trait FaceAnnotationClient: Send + Sync {
    fn annotate(&self, image_ref: &str) -> Result<Option<FaceAnnotation>, ClientError>;
}

/// Fixture-backed client keyed by image reference. Unknown references and
/// rows with an empty age read as "no face".
#[derive(Debug, Clone, Default)]
pub struct StubFaceClient {
    ages: HashMap<String, Option<FaceAnnotation>>,
}

impl StubFaceClient {
    pub fn new(entries: impl IntoIterator<Item = (String, Option<FaceAnnotation>)>) -> Self {
        Self { ages: entries.into_iter().collect() }
    }

    /// CSV with header `image_ref,age`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, DemographicsError> {
        #[derive(Deserialize)]
        struct Row {
            image_ref: String,
            age: Option<f64>,
        }
        let mut ages = HashMap::new();
        for row in csv::Reader::from_reader(reader).deserialize::<Row>() {
            let row = row?;
            let ann = row.age.map(FaceAnnotation::with_age).transpose()?;
            ages.insert(row.image_ref, ann);
        }
        Ok(Self { ages })
    }
}

impl FaceAnnotationClient for StubFaceClient {
    fn annotate(&self, image_ref: &str) -> Result<Option<FaceAnnotation>, ClientError> {
        Ok(self.ages.get(image_ref).copied().flatten())
    }
}

/// Bucket a user by the age estimated from their profile picture.
pub fn infer_age_bucket(profile: &UserProfile, client: &dyn FaceAnnotationClient) -> Result<AgeBucket, ClientError> {
    let Some(image) = profile.profile_image_ref.as_deref() else {
        return Ok(AgeBucket::Unknown);
    };
    Ok(match client.annotate(image)?.and_then(|a| a.age_estimate) {
        None => AgeBucket::Unknown,
        Some(age) if age < AGE_THRESHOLD_YEARS => AgeBucket::Under24,
        Some(_) => AgeBucket::AtLeast24,
    })
}

/// Annotate many profiles with at most `max_in_flight` concurrent client
/// calls. Results are in input order.
pub fn infer_age_buckets(
    profiles: &[&UserProfile],
    client: &dyn FaceAnnotationClient,
    max_in_flight: usize,
) -> Vec<Result<AgeBucket, ClientError>> {
    use rayon::prelude::*;
    let run = || profiles.par_iter().map(|p| infer_age_bucket(p, client)).collect();
    match rayon::ThreadPoolBuilder::new().num_threads(max_in_flight.max(1)).build() {
        Ok(pool) => pool.install(run),
        Err(_) => profiles.iter().map(|p| infer_age_bucket(p, client)).collect(),
    }
}
