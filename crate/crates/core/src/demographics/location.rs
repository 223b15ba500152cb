//! State resolution from geotags and free-text profile locations.
//!
//! Precedence, first rule that fires wins:
//! 1. a geotag inside a state bounding box (smallest box on overlap);
//! 2. a non-U.S. country named in the location string resolves to nothing;
//! 3. a state named in the string: the segment after the last comma first
//!    (full name or postal code in any case), then a full state name anywhere,
//!    then an uppercase postal code token;
//! 4. the longest city name found in the city map.

use std::collections::{BTreeMap, HashMap};
use std::io::Read;

use serde::Deserialize;

use super::{DemographicsError, StateCode, STATES};
use crate::corpus::{GeoPoint, TweetRecord, UserProfile};

/// Country names (normalized token sequences) that rule a location out.
/// Georgia and Jordan are left out because they collide with a state and a first name.
const FOREIGN_COUNTRIES: &[&str] = &[
    "afghanistan", "argentina", "australia", "austria", "bangladesh", "belgium", "brasil", "brazil", "canada",
    "chile", "china", "colombia", "deutschland", "egypt", "england", "espana", "france", "germany", "ghana",
    "greece", "india", "indonesia", "iran", "iraq", "ireland", "israel", "italia", "italy", "jamaica", "japan",
    "kenya", "korea", "malaysia", "mexico", "netherlands", "new zealand", "nigeria", "norway", "pakistan", "peru",
    "philippines", "poland", "portugal", "qatar", "russia", "saudi arabia", "scotland", "singapore",
    "south africa", "spain", "sweden", "switzerland", "thailand", "turkey", "uae", "uk", "ukraine",
    "united arab emirates", "united kingdom", "venezuela", "vietnam", "wales",
];

/// Phrases masked before the country scan so they do not trip it.
const COUNTRY_MASKS: &[&str] = &["new mexico", "new england"];

/// Extra spellings of state names.
const STATE_ALIASES: &[(&str, &str)] = &[("washington dc", "DC"), ("washington d c", "DC"), ("d c", "DC")];

/// Uppercase codes that are common words or city shorthands and only count
/// after a comma.
const AMBIGUOUS_CODES: &[&str] = &["LA", "IN", "ME", "OR", "OK", "HI"];

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct StateBox {
    pub state: StateCode,
    pub min_lat: f64,
    pub min_lon: f64,
    pub max_lat: f64,
    pub max_lon: f64,
}

impl StateBox {
    pub fn contains(&self, p: GeoPoint) -> bool {
        (self.min_lat..=self.max_lat).contains(&p.lat) && (self.min_lon..=self.max_lon).contains(&p.lon)
    }

    pub fn area(&self) -> f64 {
        (self.max_lat - self.min_lat) * (self.max_lon - self.min_lon)
    }
}

/// City map plus bounding boxes; immutable after loading.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    cities: HashMap<String, StateCode>,
    boxes: Vec<StateBox>,
    state_names: HashMap<String, StateCode>,
}

fn normalize(s: &str) -> Vec<String> {
    s.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn state_name_table() -> HashMap<String, StateCode> {
    let mut names: HashMap<String, StateCode> = STATES
        .iter()
        .map(|(c, n)| (normalize(n).join(" "), StateCode::parse(c).expect("valid")))
        .collect();
    for (alias, code) in STATE_ALIASES {
        names.insert((*alias).to_string(), StateCode::parse(code).expect("valid"));
    }
    names
}

/// Longest phrase of `tokens` (up to `max_len` tokens) found in `table`;
/// ties go to the earliest position.
fn longest_phrase<V: Copy>(tokens: &[String], table: &HashMap<String, V>, max_len: usize) -> Option<V> {
    for len in (1..=max_len.min(tokens.len())).rev() {
        for start in 0..=tokens.len() - len {
            if let Some(v) = table.get(&tokens[start..start + len].join(" ")) {
                return Some(*v);
            }
        }
    }
    None
}

fn contains_phrase(tokens: &[String], phrase: &[String]) -> bool {
    !phrase.is_empty() && tokens.windows(phrase.len()).any(|w| w == phrase)
}

impl Gazetteer {
    pub fn new(cities: impl IntoIterator<Item = (String, StateCode)>, boxes: Vec<StateBox>) -> Self {
        Self {
            cities: cities.into_iter().map(|(c, s)| (normalize(&c).join(" "), s)).collect(),
            boxes,
            state_names: state_name_table(),
        }
    }

    /// City CSV `city,state` and box CSV `state,min_lat,min_lon,max_lat,max_lon`.
    pub fn from_csv<R1: Read, R2: Read>(cities: R1, boxes: R2) -> Result<Self, DemographicsError> {
        #[derive(Deserialize)]
        struct CityRow {
            city: String,
            state: StateCode,
        }
        let mut city_rows = Vec::new();
        for row in csv::Reader::from_reader(cities).deserialize::<CityRow>() {
            let row = row?;
            city_rows.push((row.city, row.state));
        }
        let mut box_rows = Vec::new();
        for row in csv::Reader::from_reader(boxes).deserialize::<StateBox>() {
            let b = row?;
            if !(b.min_lat <= b.max_lat && b.min_lon <= b.max_lon) {
                return Err(DemographicsError::Domain(format!("degenerate bounding box for {}", b.state)));
            }
            box_rows.push(b);
        }
        Ok(Self::new(city_rows, box_rows))
    }

    fn max_city_tokens(&self) -> usize {
        self.cities.keys().map(|k| k.split(' ').count()).max().unwrap_or(0)
    }

    /// Rule 1: smallest containing box, ties by state code.
    pub fn state_for_point(&self, p: GeoPoint) -> Option<StateCode> {
        self.boxes
            .iter()
            .filter(|b| b.contains(p))
            .min_by(|a, b| a.area().total_cmp(&b.area()).then(a.state.cmp(&b.state)))
            .map(|b| b.state)
    }

    /// Rules 2-4 applied to a free-text location.
    pub fn state_for_location(&self, location: &str) -> Option<StateCode> {
        let tokens = normalize(location);
        if tokens.is_empty() {
            return None;
        }

        let mut masked = tokens.clone();
        for mask in COUNTRY_MASKS {
            let m = normalize(mask);
            let mut i = 0;
            while i + m.len() <= masked.len() {
                if masked[i..i + m.len()] == m[..] {
                    masked.splice(i..i + m.len(), std::iter::repeat_n(String::new(), m.len()));
                }
                i += 1;
            }
        }
        if FOREIGN_COUNTRIES.iter().any(|c| contains_phrase(&masked, &normalize(c))) {
            return None;
        }

        if let Some((_, tail)) = location.rsplit_once(',') {
            let tail_tokens = normalize(tail);
            if let Some(s) = longest_phrase(&tail_tokens, &self.state_names, 4) {
                return Some(s);
            }
            if let Some(s) = tail_tokens.first().filter(|t| t.len() == 2).and_then(|t| StateCode::parse(t)) {
                return Some(s);
            }
        }

        let no_short_alias: HashMap<String, StateCode> =
            self.state_names.iter().filter(|(k, _)| k.as_str() != "d c").map(|(k, v)| (k.clone(), *v)).collect();
        if let Some(s) = longest_phrase(&tokens, &no_short_alias, 4) {
            return Some(s);
        }

        let upper_code = location
            .split(|c: char| !c.is_alphanumeric())
            .filter(|t| t.len() == 2 && t.chars().all(|c| c.is_ascii_uppercase()))
            .filter(|t| !AMBIGUOUS_CODES.contains(t))
            .find_map(StateCode::parse);
        if upper_code.is_some() {
            return upper_code;
        }

        longest_phrase(&tokens, &self.cities, self.max_city_tokens())
    }
}

/// Resolve the state for one record and its author.
pub fn resolve_state(record: &TweetRecord, profile: &UserProfile, gazetteer: &Gazetteer) -> Option<StateCode> {
    record
        .geo
        .and_then(|p| gazetteer.state_for_point(p))
        .or_else(|| gazetteer.state_for_location(&profile.location_raw))
}

/// One state per user for the whole study window: the earliest geotag that
/// falls inside a box, otherwise the profile location.
pub fn resolve_user_state<'a, I>(records: I, profile: &UserProfile, gazetteer: &Gazetteer) -> Option<StateCode>
where
    I: IntoIterator<Item = &'a TweetRecord>,
{
    let mut own: Vec<&TweetRecord> = records.into_iter().filter(|r| r.author_id == profile.user_id).collect();
    own.sort_by(|a, b| a.created_at.cmp(&b.created_at).then_with(|| a.tweet_id.cmp(&b.tweet_id)));
    own.iter()
        .find_map(|r| r.geo.and_then(|p| gazetteer.state_for_point(p)))
        .or_else(|| gazetteer.state_for_location(&profile.location_raw))
}

/// [`resolve_user_state`] for every profile.
pub fn resolve_user_states(
    records: &[TweetRecord],
    profiles: &BTreeMap<String, UserProfile>,
    gazetteer: &Gazetteer,
) -> BTreeMap<String, Option<StateCode>> {
    let mut by_author: BTreeMap<&str, Vec<&TweetRecord>> = BTreeMap::new();
    for r in records {
        by_author.entry(&r.author_id).or_default().push(r);
    }
    profiles
        .iter()
        .map(|(id, p)| {
            let own = by_author.get(id.as_str()).map(Vec::as_slice).unwrap_or_default();
            (id.clone(), resolve_user_state(own.iter().copied(), p, gazetteer))
        })
        .collect()
}
