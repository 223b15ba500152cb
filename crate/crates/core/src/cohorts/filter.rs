use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::CohortError;
use crate::corpus::UserProfile;
use crate::demographics::{AgeBucket, GenderLabel, StateCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Predicate {
    All,
    GenderInferred,
    OnlyFemale,
    OnlyMale,
    LocationInferred,
    AgeInferred,
    AgeUnder24,
    AgeAtLeast24,
    /// Strictly fewer followers than the threshold.
    FollowersBelow(u64),
    StatusesBelow(u64),
    /// Users with at least one tweet classified first person. Signals for
    /// such cohorts also count only first-person tweets.
    FirstPersonOnly,
}

/// Everything the predicates read about one user.
#[derive(Debug, Clone, PartialEq)]
pub struct UserAnnotation {
    pub profile: UserProfile,
    pub gender: GenderLabel,
    pub age: AgeBucket,
    pub state: Option<StateCode>,
    pub first_person: bool,
}

impl Predicate {
    fn holds(&self, u: &UserAnnotation) -> bool {
        match *self {
            Predicate::All => true,
            Predicate::GenderInferred => u.gender != GenderLabel::Unknown,
            Predicate::OnlyFemale => u.gender == GenderLabel::Female,
            Predicate::OnlyMale => u.gender == GenderLabel::Male,
            Predicate::LocationInferred => u.state.is_some(),
            Predicate::AgeInferred => u.age != AgeBucket::Unknown,
            Predicate::AgeUnder24 => u.age == AgeBucket::Under24,
            Predicate::AgeAtLeast24 => u.age == AgeBucket::AtLeast24,
            Predicate::FollowersBelow(t) => u.profile.followers < t,
            Predicate::StatusesBelow(t) => u.profile.statuses < t,
            Predicate::FirstPersonOnly => u.first_person,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohortSpec {
    pub name: String,
    pub predicates: Vec<Predicate>,
}

impl CohortSpec {
    pub fn new(name: &str, predicates: Vec<Predicate>) -> Self {
        CohortSpec { name: name.to_string(), predicates }
    }

    fn has(&self, p: Predicate) -> bool {
        self.predicates.contains(&p)
    }

    pub fn first_person_only(&self) -> bool {
        self.has(Predicate::FirstPersonOnly)
    }

    /// Rejects predicate sets no user can satisfy by construction.
    pub fn validate(&self) -> Result<(), CohortError> {
        let clash = [
            (Predicate::OnlyFemale, Predicate::OnlyMale),
            (Predicate::AgeUnder24, Predicate::AgeAtLeast24),
        ]
        .into_iter()
        .find(|(a, b)| self.has(*a) && self.has(*b));
        if let Some((a, b)) = clash {
            return Err(CohortError::Spec { cohort: self.name.clone(), reason: format!("{a:?} contradicts {b:?}") });
        }
        if let Some(p) = self.predicates.iter().find(|p| matches!(p, Predicate::FollowersBelow(0) | Predicate::StatusesBelow(0))) {
            return Err(CohortError::Spec { cohort: self.name.clone(), reason: format!("{p:?} excludes every user") });
        }
        if self.name.trim().is_empty() {
            return Err(CohortError::Spec { cohort: self.name.clone(), reason: "empty cohort name".into() });
        }
        Ok(())
    }

    pub fn matches(&self, u: &UserAnnotation) -> bool {
        self.predicates.iter().all(|p| p.holds(u))
    }
}

pub fn apply_cohort_filter(users: &BTreeMap<String, UserAnnotation>, spec: &CohortSpec) -> Result<BTreeSet<String>, CohortError> {
    spec.validate()?;
    Ok(users.iter().filter(|(_, u)| spec.matches(u)).map(|(id, _)| id.clone()).collect())
}
