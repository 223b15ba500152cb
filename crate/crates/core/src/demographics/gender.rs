use std::collections::HashMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::DemographicsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NameLabel {
    Male,
    Female,
    Ambiguous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenderLabel {
    Male,
    Female,
    Unknown,
}

/// First name (lowercase) to label.
#[derive(Debug, Clone, Default)]
pub struct NameDictionary {
    entries: HashMap<String, NameLabel>,
}

impl NameDictionary {
    pub fn from_entries<I: IntoIterator<Item = (String, NameLabel)>>(entries: I) -> Result<Self, DemographicsError> {
        let entries: HashMap<_, _> = entries.into_iter().map(|(k, v)| (k.to_lowercase(), v)).collect();
        if entries.is_empty() {
            return Err(DemographicsError::EmptyDictionary);
        }
        Ok(Self { entries })
    }

    /// CSV with header `name,label`, label one of male/female/ambiguous.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, DemographicsError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut entries = Vec::new();
        for row in rdr.records() {
            let row = row?;
            let label = match row.get(1).map(str::trim) {
                Some("male") => NameLabel::Male,
                Some("female") => NameLabel::Female,
                Some("ambiguous") => NameLabel::Ambiguous,
                other => return Err(DemographicsError::InvalidLabel(other.unwrap_or_default().to_string())),
            };
            entries.push((row.get(0).unwrap_or_default().trim().to_string(), label));
        }
        Self::from_entries(entries)
    }

    pub fn get(&self, first_name: &str) -> Option<NameLabel> {
        self.entries.get(first_name).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Look up the first whitespace-delimited token of `name`, lowercased and
/// stripped of non-letters. Ambiguous or absent names are unknown.
pub fn infer_gender(name: &str, dictionary: &NameDictionary) -> GenderLabel {
    let Some(first) = name.split_whitespace().next() else {
        return GenderLabel::Unknown;
    };
    let key: String = first.chars().filter(|c| c.is_alphabetic()).flat_map(char::to_lowercase).collect();
    match dictionary.get(&key) {
        Some(NameLabel::Male) => GenderLabel::Male,
        Some(NameLabel::Female) => GenderLabel::Female,
        _ => GenderLabel::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dict() -> NameDictionary {
        NameDictionary::from_csv("name,label\njohn,male\nmary,female\nalex,ambiguous\n".as_bytes()).unwrap()
    }

    #[test]
    fn fixture_lookups() {
        let d = dict();
        assert_eq!(infer_gender("John Smith", &d), GenderLabel::Male);
        assert_eq!(infer_gender("MARY!", &d), GenderLabel::Female);
        assert_eq!(infer_gender("alex p", &d), GenderLabel::Unknown);
        assert_eq!(infer_gender("Dr. Zorblax", &d), GenderLabel::Unknown);
        assert_eq!(infer_gender("   ", &d), GenderLabel::Unknown);
    }

    #[test]
    fn bad_dictionaries() {
        assert!(matches!(NameDictionary::from_csv("name,label\n".as_bytes()), Err(DemographicsError::EmptyDictionary)));
        assert!(matches!(
            NameDictionary::from_csv("name,label\nx,robot\n".as_bytes()),
            Err(DemographicsError::InvalidLabel(_))
        ));
    }

    proptest! {
        #[test]
        fn absent_names_are_unknown(name in "[a-z]{1,8}( [a-z]{1,8})?") {
            let d = dict();
            let first = name.split_whitespace().next().unwrap();
            if d.get(first).is_none() {
                prop_assert_eq!(infer_gender(&name, &d), GenderLabel::Unknown);
            }
        }
    }
}
