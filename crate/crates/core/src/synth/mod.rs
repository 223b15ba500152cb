//! Deterministic synthetic scenarios.
//!
//! A latent weekly activity curve drives both the offline series and the
//! keyword tweets of personal accounts. Organizations, topic-focused
//! accounts and bots add keyword tweets that ignore the curve; bots follow
//! a shared per-week campaign intensity so their noise does not average
//! out. Every random draw comes from a stream derived from the master seed
//! and a per-user or per-series label, so output is identical for any
//! thread count.

mod generate;
mod geography;
mod text;
mod write;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

pub use generate::{generate_scenario, Scenario, UserTruth};
pub use text::Topic;
pub use write::{write_scenario, ScenarioFiles};

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("invalid scenario: {0}")]
    Spec(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Archetype {
    Personal,
    Organization,
    TopicFocused,
    Bot,
}

impl Archetype {
    pub const ALL: [Archetype; 4] = [Archetype::Personal, Archetype::Organization, Archetype::TopicFocused, Archetype::Bot];

    pub fn as_str(self) -> &'static str {
        match self {
            Archetype::Personal => "personal",
            Archetype::Organization => "organization",
            Archetype::TopicFocused => "topicFocused",
            Archetype::Bot => "bot",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Shape {
    /// Annual cosine peaking in late winter plus small noise.
    Seasonal,
    /// Flat level with a quarterly wobble, random spikes and more noise.
    NoisySpiky,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct Population {
    pub personal: usize,
    pub organization: usize,
    pub topic_focused: usize,
    pub bot: usize,
}

impl Default for Population {
    fn default() -> Self {
        Population { personal: 2000, organization: 150, topic_focused: 150, bot: 400 }
    }
}

impl Population {
    pub fn get(&self, a: Archetype) -> usize {
        match a {
            Archetype::Personal => self.personal,
            Archetype::Organization => self.organization,
            Archetype::TopicFocused => self.topic_focused,
            Archetype::Bot => self.bot,
        }
    }

    pub fn total(&self) -> usize {
        Archetype::ALL.iter().map(|&a| self.get(a)).sum()
    }
}

/// Per user and week: a first-person keyword tweet with probability
/// `signal_rate * latent[w]`; an unrelated keyword tweet with probability
/// `noise_rate * ((1 - campaign_weight) + campaign_weight * campaign[w])`;
/// an off-topic tweet with probability `chatter_rate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Emission {
    pub signal_rate: f64,
    pub noise_rate: f64,
    #[serde(default)]
    pub campaign_weight: f64,
    #[serde(default)]
    pub chatter_rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct Emissions {
    pub personal: Emission,
    pub organization: Emission,
    pub topic_focused: Emission,
    pub bot: Emission,
}

impl Default for Emissions {
    fn default() -> Self {
        Emissions {
            personal: Emission { signal_rate: 0.35, noise_rate: 0.01, campaign_weight: 0.0, chatter_rate: 0.05 },
            organization: Emission { signal_rate: 0.0, noise_rate: 0.25, campaign_weight: 0.5, chatter_rate: 0.0 },
            topic_focused: Emission { signal_rate: 0.05, noise_rate: 0.3, campaign_weight: 0.5, chatter_rate: 0.02 },
            bot: Emission { signal_rate: 0.0, noise_rate: 0.3, campaign_weight: 1.0, chatter_rate: 0.0 },
        }
    }
}

impl Emissions {
    pub fn get(&self, a: Archetype) -> &Emission {
        match a {
            Archetype::Personal => &self.personal,
            Archetype::Organization => &self.organization,
            Archetype::TopicFocused => &self.topic_focused,
            Archetype::Bot => &self.bot,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct DemographicMix {
    pub female_share: f64,
    /// Personal accounts whose display name is a nickname.
    pub nickname_share: f64,
    pub ambiguous_name_share: f64,
    pub under24_share: f64,
    /// Personal accounts whose profile picture shows a detectable face.
    pub face_rate: f64,
    /// Personal accounts that geotag their tweets.
    pub geotag_rate: f64,
    /// Accounts with a resolvable location string.
    pub location_rate: f64,
    /// Accounts that should fail the spam filter.
    pub spam_share: f64,
}

impl Default for DemographicMix {
    fn default() -> Self {
        DemographicMix {
            female_share: 0.55,
            nickname_share: 0.2,
            ambiguous_name_share: 0.05,
            under24_share: 0.4,
            face_rate: 0.6,
            geotag_rate: 0.1,
            location_rate: 0.7,
            spam_share: 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct ScenarioSpec {
    pub n_weeks: usize,
    /// Monday of week 0.
    pub week_start: NaiveDate,
    pub topic: Topic,
    pub shape: Shape,
    pub population: Population,
    pub emission: Emissions,
    pub demographics: DemographicMix,
    /// Offline value is `scale * (floor + latent) * (1 + noise)`.
    pub offline_scale: f64,
    pub offline_floor: f64,
    /// Standard deviation of the multiplicative offline noise.
    pub offline_noise: f64,
    /// Keyword tweets sampled into the label file.
    pub n_labels: usize,
    /// Users in the general-terms reference corpus.
    pub n_baseline_users: usize,
    pub seed: u64,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        ScenarioSpec {
            n_weeks: 47,
            week_start: NaiveDate::from_ymd_opt(2014, 1, 6).expect("valid date"),
            topic: Topic::Flu,
            shape: Shape::Seasonal,
            population: Population::default(),
            emission: Emissions::default(),
            demographics: DemographicMix::default(),
            offline_scale: 10_000.0,
            offline_floor: 0.15,
            offline_noise: 0.03,
            n_labels: 1000,
            n_baseline_users: 3000,
            seed: 2014,
        }
    }
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::Spec(m));
        if self.n_weeks == 0 {
            return bad("nWeeks must be positive".into());
        }
        if self.population.personal == 0 {
            return bad("population.personal must be positive".into());
        }
        for a in Archetype::ALL {
            let e = self.emission.get(a);
            for (name, p) in [("signalRate", e.signal_rate), ("noiseRate", e.noise_rate), ("campaignWeight", e.campaign_weight), ("chatterRate", e.chatter_rate)] {
                if !(0.0..=1.0).contains(&p) {
                    return bad(format!("emission.{}.{name} = {p} is not a probability", a.as_str()));
                }
            }
        }
        let d = &self.demographics;
        for (name, p) in [
            ("femaleShare", d.female_share),
            ("nicknameShare", d.nickname_share),
            ("ambiguousNameShare", d.ambiguous_name_share),
            ("under24Share", d.under24_share),
            ("faceRate", d.face_rate),
            ("geotagRate", d.geotag_rate),
            ("locationRate", d.location_rate),
            ("spamShare", d.spam_share),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("demographics.{name} = {p} is not a probability"));
            }
        }
        if d.nickname_share + d.ambiguous_name_share > 1.0 {
            return bad("nicknameShare + ambiguousNameShare exceeds 1".into());
        }
        if !(self.offline_scale > 0.0) || !(self.offline_floor >= 0.0) || !(self.offline_noise >= 0.0) || self.offline_noise >= 0.5 {
            return bad("offline scale must be positive, floor non-negative and noise in [0, 0.5)".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
