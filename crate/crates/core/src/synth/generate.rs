use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use chrono::{DateTime, Duration, NaiveDate, Utc};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Normal, WeightedIndex};
use rayon::prelude::*;

use super::geography::{boxes, cities, code, STATE_TABLE};
use super::text::{self, AMBIGUOUS_NAMES, BOT_BIOS, FEMALE_NAMES, MALE_NAMES, NICKNAMES, ORG_BIOS, ORG_WORDS, PERSONAL_BIOS, SURNAMES};
use super::{Archetype, ScenarioSpec, Shape, SynthError};
use crate::corpus::{GeoPoint, TweetRecord, UserProfile, WeeklySignal};
use crate::demographics::{AgeBucket, Gazetteer, GenderLabel, NameLabel, StateBox, StateCode};
use crate::firstperson::Label;
use crate::seed::rng_for;

/// Generator-side facts about one account.
#[derive(Debug, Clone, PartialEq)]
pub struct UserTruth {
    pub archetype: Archetype,
    /// Unknown for organizations and bots.
    pub gender: GenderLabel,
    /// Unknown when no face is visible.
    pub age: AgeBucket,
    pub state: StateCode,
    pub spam: bool,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub spec: ScenarioSpec,
    /// Latent activity in `[0, 1]`, one value per week.
    pub latent: Vec<f64>,
    /// Shared campaign intensity per week, mean 1.
    pub campaign: Vec<f64>,
    pub offline: WeeklySignal,
    /// Sorted by tweet id, which follows creation time.
    pub records: Vec<TweetRecord>,
    pub profiles: BTreeMap<String, UserProfile>,
    /// Ids of tweets emitted by the latent signal.
    pub first_person: BTreeSet<String>,
    pub labels: BTreeMap<String, Label>,
    pub truth: BTreeMap<String, UserTruth>,
    pub baseline_records: Vec<TweetRecord>,
    pub baseline_profiles: BTreeMap<String, UserProfile>,
    pub names: Vec<(String, NameLabel)>,
    pub cities: Vec<(String, StateCode)>,
    pub boxes: Vec<StateBox>,
    /// `(image_ref, age)`; `None` means no face detected.
    pub faces: Vec<(String, Option<f64>)>,
    pub population: BTreeMap<StateCode, f64>,
}

struct Pending {
    created_at: DateTime<Utc>,
    text: String,
    geo: Option<GeoPoint>,
    first_person: bool,
    keyword: bool,
}

struct GeneratedUser {
    profile: UserProfile,
    truth: UserTruth,
    face: Option<(String, Option<f64>)>,
    tweets: Vec<Pending>,
}

const JUNK_LOCATIONS: &[&str] = &["", "Earth", "somewhere", "London, UK", "wherever the wifi is", "Toronto, Canada", "in my head"];

fn week_origin(start: NaiveDate) -> DateTime<Utc> {
    start.and_hms_opt(0, 0, 0).expect("midnight exists").and_utc()
}

fn latent_curve(spec: &ScenarioSpec) -> Vec<f64> {
    let mut rng = rng_for(spec.seed, "latent", 0);
    let small = Normal::new(0.0, 0.02).expect("valid sd");
    let large = Normal::new(0.0, 0.06).expect("valid sd");
    (0..spec.n_weeks)
        .map(|w| {
            let w = w as f64;
            match spec.shape {
                Shape::Seasonal => (0.5 + 0.45 * (2.0 * PI * (w - 5.0) / 52.0).cos() + small.sample(&mut rng)).clamp(0.02, 1.0),
                Shape::NoisySpiky => {
                    let spike = if rng.gen_bool(0.12) { rng.gen_range(0.2..0.45) } else { 0.0 };
                    (0.45 + 0.08 * (2.0 * PI * w / 13.0).sin() + spike + large.sample(&mut rng)).clamp(0.05, 1.0)
                }
            }
        })
        .collect()
}

fn lognormal(rng: &mut ChaCha8Rng, median: f64, sigma: f64) -> f64 {
    LogNormal::new(median.ln(), sigma).expect("valid parameters").sample(rng)
}

fn state_weights() -> WeightedIndex<f64> {
    WeightedIndex::new(STATE_TABLE.iter().map(|s| s.5)).expect("positive weights")
}

fn location_string(rng: &mut ChaCha8Rng, state: StateCode, city: &str, resolvable: bool) -> String {
    if !resolvable {
        return JUNK_LOCATIONS.choose(rng).expect("non-empty").to_string();
    }
    match rng.gen_range(0..4) {
        0 => format!("{city}, {}", state.as_str()),
        1 => format!("{city}, {}", state.name()),
        2 => state.name().to_string(),
        _ => city.to_string(),
    }
}

fn point_in(state: StateCode, gaz: &Gazetteer, all_boxes: &[StateBox], rng: &mut ChaCha8Rng) -> Option<GeoPoint> {
    let b = all_boxes.iter().find(|b| b.state == state)?;
    (0..20).find_map(|_| {
        let p = GeoPoint::new(rng.gen_range(b.min_lat..b.max_lat), rng.gen_range(b.min_lon..b.max_lon))?;
        (gaz.state_for_point(p) == Some(state)).then_some(p)
    })
}

fn counts(rng: &mut ChaCha8Rng, a: Archetype) -> [u64; 5] {
    // followers, friends, statuses, favourites, listed
    let (f, fr, st, fav, li) = match a {
        Archetype::Personal => ((250.0, 1.0), (300.0, 0.8), (3000.0, 1.0), (1000.0, 1.2), (3.0, 1.0)),
        Archetype::Organization => ((8000.0, 1.0), (800.0, 0.8), (15000.0, 0.8), (200.0, 1.0), (100.0, 0.8)),
        Archetype::TopicFocused => ((1500.0, 0.9), (1200.0, 0.8), (20000.0, 0.6), (2000.0, 1.0), (30.0, 0.8)),
        Archetype::Bot => ((60.0, 0.6), (2000.0, 0.5), (30000.0, 0.4), (20.0, 1.0), (0.5, 1.0)),
    };
    [
        lognormal(rng, f.0, f.1).clamp(10.0, 5.0e6) as u64,
        lognormal(rng, fr.0, fr.1) as u64,
        lognormal(rng, st.0, st.1).clamp(11.0, 49_999.0) as u64,
        lognormal(rng, fav.0, fav.1) as u64,
        lognormal(rng, li.0, li.1) as u64,
    ]
}

fn generate_user(spec: &ScenarioSpec, i: usize, a: Archetype, ctx: &Context) -> GeneratedUser {
    let mut rng = rng_for(spec.seed, "user", i as u64);
    let d = &spec.demographics;
    let uid = (100_000 + i).to_string();
    let (code_str, .., city_list) = STATE_TABLE[ctx.state_weights.sample(&mut rng)];
    let state = code(code_str);
    let city = *city_list.choose(&mut rng).expect("non-empty");
    let spam = rng.gen_bool(d.spam_share);

    let female = rng.gen_bool(d.female_share);
    let (name, gender) = match a {
        Archetype::Personal | Archetype::TopicFocused if a == Archetype::Personal || rng.gen_bool(0.5) => {
            let r: f64 = rng.gen();
            let first = if r < d.nickname_share {
                NICKNAMES.choose(&mut rng).expect("non-empty").to_string()
            } else if r < d.nickname_share + d.ambiguous_name_share {
                AMBIGUOUS_NAMES.choose(&mut rng).expect("non-empty").to_string()
            } else if female {
                FEMALE_NAMES.choose(&mut rng).expect("non-empty").to_string()
            } else {
                MALE_NAMES.choose(&mut rng).expect("non-empty").to_string()
            };
            let full = format!("{first} {}", SURNAMES.choose(&mut rng).expect("non-empty"));
            (full, if female { GenderLabel::Female } else { GenderLabel::Male })
        }
        Archetype::Bot => (format!("Deals{}", rng.gen_range(10..999)), GenderLabel::Unknown),
        _ => {
            let w: Vec<&&str> = ORG_WORDS.choose_multiple(&mut rng, 2).collect();
            (format!("{city} {} {}", w[0], w[1]), GenderLabel::Unknown)
        }
    };

    let (image, age) = match a {
        Archetype::Personal => {
            if rng.gen_bool(d.face_rate) {
                let years = if rng.gen_bool(d.under24_share) { rng.gen_range(15.0..23.9) } else { rng.gen_range(24.5..65.0) };
                let bucket = if years < 24.0 { AgeBucket::Under24 } else { AgeBucket::AtLeast24 };
                (Some((format!("img/{uid}.jpg"), Some(years))), bucket)
            } else if rng.gen_bool(0.7) {
                (Some((format!("img/{uid}.jpg"), None)), AgeBucket::Unknown)
            } else {
                (None, AgeBucket::Unknown)
            }
        }
        Archetype::Organization | Archetype::TopicFocused => (Some((format!("img/{uid}.png"), None)), AgeBucket::Unknown),
        Archetype::Bot => (None, AgeBucket::Unknown),
    };

    let resolvable = rng.gen_bool(d.location_rate);
    let location_raw = location_string(&mut rng, state, city, resolvable);
    let geotags = a == Archetype::Personal && rng.gen_bool(d.geotag_rate);
    let [followers, friends, statuses, favourites, listed] = counts(&mut rng, a);
    let bio = if spam {
        String::new()
    } else {
        let pool = match a {
            Archetype::Personal | Archetype::TopicFocused => PERSONAL_BIOS,
            Archetype::Organization => ORG_BIOS,
            Archetype::Bot => BOT_BIOS,
        };
        pool.choose(&mut rng).expect("non-empty").to_string()
    };
    let profile = UserProfile {
        user_id: uid.clone(),
        screen_name: format!("{}{}", name.split_whitespace().next().unwrap_or("user").to_lowercase(), i),
        name,
        bio,
        location_raw,
        profile_image_ref: image.as_ref().map(|(r, _)| r.clone()),
        followers,
        friends,
        statuses,
        favourites,
        listed,
        account_created_at: ctx.origin - Duration::days(rng.gen_range(30..2500)),
        lang: "en".into(),
    };

    let e = spec.emission.get(a);
    let mut tweets = Vec::new();
    for w in 0..spec.n_weeks {
        let emit = |rng: &mut ChaCha8Rng, text: String, first_person: bool, keyword: bool, tweets: &mut Vec<Pending>| {
            let created_at = ctx.origin + Duration::weeks(w as i64) + Duration::seconds(rng.gen_range(60..7 * 86_400 - 60));
            let geo = if geotags { point_in(state, &ctx.gazetteer, &ctx.boxes, rng) } else { None };
            tweets.push(Pending { created_at, text, geo, first_person, keyword });
        };
        let p_signal = (e.signal_rate * ctx.latent[w]).min(1.0);
        if rng.gen_bool(p_signal) {
            let n = if rng.gen_bool(0.15) { 2 } else { 1 };
            for _ in 0..n {
                let t = text::first_person(spec.topic, &mut rng, city, state.name());
                emit(&mut rng, t, true, true, &mut tweets);
            }
        }
        let p_noise = (e.noise_rate * ((1.0 - e.campaign_weight) + e.campaign_weight * ctx.campaign[w])).min(1.0);
        if rng.gen_bool(p_noise) {
            let n = if a == Archetype::Bot { rng.gen_range(1..=2) } else { 1 };
            for _ in 0..n {
                let t = text::other(spec.topic, &mut rng, city, state.name());
                emit(&mut rng, t, false, true, &mut tweets);
            }
        }
        if rng.gen_bool(e.chatter_rate) {
            let t = text::chatter(&mut rng, city);
            emit(&mut rng, t, false, false, &mut tweets);
        }
    }

    GeneratedUser { profile, truth: UserTruth { archetype: a, gender, age, state, spam }, face: image, tweets }
}

struct Context {
    origin: DateTime<Utc>,
    latent: Vec<f64>,
    campaign: Vec<f64>,
    state_weights: WeightedIndex<f64>,
    gazetteer: Gazetteer,
    boxes: Vec<StateBox>,
}

pub fn generate_scenario(spec: &ScenarioSpec) -> Result<Scenario, SynthError> {
    spec.validate()?;
    let latent = latent_curve(spec);
    let mut crng = rng_for(spec.seed, "campaign", 0);
    let campaign: Vec<f64> = (0..spec.n_weeks).map(|_| crng.gen_range(0.0..2.0)).collect();
    let mut orng = rng_for(spec.seed, "offline", 0);
    let noise = Normal::new(0.0, spec.offline_noise.max(1e-12)).expect("valid sd");
    let offline_values: Vec<f64> = latent
        .iter()
        .map(|l| spec.offline_scale * (spec.offline_floor + l) * (1.0 + noise.sample(&mut orng)).max(0.5))
        .collect();
    let offline = WeeklySignal::new(spec.week_start, offline_values).map_err(|e| SynthError::Spec(e.to_string()))?;

    let all_boxes = boxes();
    let ctx = Context {
        origin: week_origin(spec.week_start),
        latent: latent.clone(),
        campaign: campaign.clone(),
        state_weights: state_weights(),
        gazetteer: Gazetteer::new(cities(), all_boxes.clone()),
        boxes: all_boxes.clone(),
    };

    let roster: Vec<Archetype> = Archetype::ALL.iter().flat_map(|&a| std::iter::repeat_n(a, spec.population.get(a))).collect();
    let users: Vec<GeneratedUser> = roster.par_iter().enumerate().map(|(i, &a)| generate_user(spec, i, a, &ctx)).collect();

    let mut pending: Vec<(DateTime<Utc>, usize, usize)> = Vec::new();
    for (ui, u) in users.iter().enumerate() {
        for (k, t) in u.tweets.iter().enumerate() {
            pending.push((t.created_at, ui, k));
        }
    }
    pending.sort();
    let mut records = Vec::with_capacity(pending.len());
    let mut first_person = BTreeSet::new();
    let mut keyword_ids = Vec::new();
    for (seq, &(_, ui, k)) in pending.iter().enumerate() {
        let u = &users[ui];
        let t = &u.tweets[k];
        let id = (1_000_000_000u64 + seq as u64).to_string();
        if t.first_person {
            first_person.insert(id.clone());
        }
        if t.keyword {
            keyword_ids.push(id.clone());
        }
        records.push(TweetRecord {
            tweet_id: id,
            author_id: u.profile.user_id.clone(),
            text: t.text.clone(),
            created_at: t.created_at,
            lang: u.profile.lang.clone(),
            geo: t.geo,
            topic_keywords_hit: Vec::new(),
        });
    }

    let mut lrng = rng_for(spec.seed, "labels", 0);
    let n_labels = spec.n_labels.min(keyword_ids.len());
    let (chosen, _) = keyword_ids.partial_shuffle(&mut lrng, n_labels);
    let labels: BTreeMap<String, Label> = chosen
        .iter()
        .map(|id| (id.clone(), if first_person.contains(id) { Label::FirstPerson } else { Label::Other }))
        .collect();

    let (baseline_records, baseline_profiles) = baseline_corpus(spec, &ctx);

    let mut names: Vec<(String, NameLabel)> = FEMALE_NAMES
        .iter()
        .map(|n| (n.to_string(), NameLabel::Female))
        .chain(MALE_NAMES.iter().map(|n| (n.to_string(), NameLabel::Male)))
        .chain(AMBIGUOUS_NAMES.iter().map(|n| (n.to_string(), NameLabel::Ambiguous)))
        .collect();
    names.sort_by(|a, b| a.0.cmp(&b.0));

    let faces = users.iter().filter_map(|u| u.face.clone()).collect();
    let population = STATE_TABLE.iter().map(|s| (code(s.0), s.5)).collect();
    let mut profiles = BTreeMap::new();
    let mut truth = BTreeMap::new();
    for u in users {
        truth.insert(u.profile.user_id.clone(), u.truth);
        profiles.insert(u.profile.user_id.clone(), u.profile);
    }

    Ok(Scenario {
        spec: spec.clone(),
        latent,
        campaign,
        offline,
        records,
        profiles,
        first_person,
        labels,
        truth,
        baseline_records,
        baseline_profiles,
        names,
        cities: cities(),
        boxes: all_boxes,
        faces,
        population,
    })
}

/// One general-terms tweet per reference user. Per-state uptake varies so
/// penetration rates differ between states.
fn baseline_corpus(spec: &ScenarioSpec, ctx: &Context) -> (Vec<TweetRecord>, BTreeMap<String, UserProfile>) {
    let mut prng = rng_for(spec.seed, "penetration", 0);
    let uptake: Vec<f64> = STATE_TABLE.iter().map(|s| s.5 * prng.gen_range(0.6..1.4)).collect();
    let weights = WeightedIndex::new(&uptake).expect("positive weights");
    let mut rows: Vec<(DateTime<Utc>, TweetRecord, UserProfile)> = (0..spec.n_baseline_users)
        .into_par_iter()
        .map(|j| {
            let mut rng = rng_for(spec.seed, "baseline", j as u64);
            let (code_str, .., city_list) = STATE_TABLE[weights.sample(&mut rng)];
            let state = code(code_str);
            let city = *city_list.choose(&mut rng).expect("non-empty");
            let uid = (900_000 + j).to_string();
            let [followers, friends, statuses, favourites, listed] = counts(&mut rng, Archetype::Personal);
            let profile = UserProfile {
                user_id: uid.clone(),
                name: format!("{} {}", FEMALE_NAMES.choose(&mut rng).expect("non-empty"), SURNAMES.choose(&mut rng).expect("non-empty")),
                screen_name: format!("ref{j}"),
                bio: PERSONAL_BIOS.choose(&mut rng).expect("non-empty").to_string(),
                location_raw: {
                    let with_city = rng.gen_bool(0.85);
                    location_string(&mut rng, state, city, with_city)
                },
                profile_image_ref: None,
                followers,
                friends,
                statuses,
                favourites,
                listed,
                account_created_at: ctx.origin - Duration::days(rng.gen_range(30..2500)),
                lang: "en".into(),
            };
            let created_at = ctx.origin
                + Duration::weeks(rng.gen_range(0..spec.n_weeks as i64))
                + Duration::seconds(rng.gen_range(60..7 * 86_400 - 60));
            let rec = TweetRecord {
                tweet_id: String::new(),
                author_id: uid,
                text: text::baseline(&mut rng),
                created_at,
                lang: "en".into(),
                geo: None,
                topic_keywords_hit: Vec::new(),
            };
            (created_at, rec, profile)
        })
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.author_id.cmp(&b.1.author_id)));
    let mut records = Vec::with_capacity(rows.len());
    let mut profiles = BTreeMap::new();
    for (seq, (_, mut rec, prof)) in rows.into_iter().enumerate() {
        rec.tweet_id = (2_000_000_000u64 + seq as u64).to_string();
        records.push(rec);
        profiles.insert(prof.user_id.clone(), prof);
    }
    (records, profiles)
}
