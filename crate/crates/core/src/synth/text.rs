//! Template text for generated tweets.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Topic {
    Flu,
    Unemployment,
}

const FLU_FIRST_PERSON: &[&str] = &[
    "ugh i have the flu",
    "stuck in bed with the flu {day}",
    "pretty sure i caught the flu from my {rel}",
    "home sick with the flu again",
    "this flu is killing me",
    "fever and chills all night, i think it's the flu",
    "my {rel} and i both have the flu",
    "missed {event} because of the flu",
    "day {n} of the flu and i still feel awful",
    "can't believe i got the flu {time}",
    "i feel terrible, flu hit me hard",
    "woke up with the flu, calling in sick",
];

const FLU_OTHER: &[&str] = &[
    "get your flu shot at {brand} today",
    "{brand} pharmacy offers free flu shots this week",
    "flu season update: cases rising in {city}",
    "health officials report flu activity in {state}",
    "5 tips to avoid the flu this season",
    "breaking: flu outbreak closes school in {city}",
    "is it a cold or the flu? read more",
    "new study on flu vaccine effectiveness",
    "flu relief medicine {pct} off at {brand}",
    "flu shot clinic {day} at the {city} community center",
];

const JOB_FIRST_PERSON: &[&str] = &[
    "just got laid off from my job",
    "i got fired today",
    "lost my job at the {place}",
    "time to get a job i guess",
    "filing for unemployment tomorrow",
    "got canned after {n} years",
    "my {rel} got laid off {time}",
    "so i lost my stupid job {day}",
    "i got axed this morning",
    "got the pink slip, now what",
];

const JOB_OTHER: &[&str] = &[
    "unemployment rate falls to {pct}",
    "{n} workers laid off at {brand} plant",
    "jobless claims rise as unemployment grows in {state}",
    "how to file for unemployment benefits",
    "hiring now! get a job with {brand} today",
    "report: hundreds downsized at {city} factory",
    "unemployment numbers out {day}",
    "{brand} announces layoffs, 300 laid off",
];

const CHATTER: &[&str] = &[
    "love this weather",
    "listening to music all day",
    "coffee time",
    "best pizza in {city}",
    "can't wait for {event}",
    "what a game tonight",
    "new shoes {day}",
];

const BASELINE: &[&str] = &[
    "i love this music",
    "the weather is so nice {day}",
    "like this thing a lot",
    "music makes everything better",
    "weird thing happened {day}",
    "love my {rel}",
];

const FILLERS: &[&str] = &["lol", "ugh", "smh", "seriously", "omg", "tonight", "again", "help", "#sick", "#mondays", "so tired", "whatever"];
const DAYS: &[&str] = &["today", "monday", "tuesday", "this weekend", "tonight", "friday"];
const RELATIVES: &[&str] = &["sister", "brother", "mom", "dad", "roommate", "boyfriend", "girlfriend", "kid"];
const EVENTS: &[&str] = &["the party", "work", "class", "the game", "my exam", "the concert"];
const TIMES: &[&str] = &["this week", "twice this year", "right before vacation", "again"];
const BRANDS: &[&str] = &["Acme", "Walgreens", "CVS", "Target", "Kroger", "Rite Aid"];
const PLACES: &[&str] = &["warehouse", "store", "office", "restaurant", "call center"];

fn fill<R: Rng>(template: &str, rng: &mut R, city: &str, state: &str) -> String {
    let mut s = template.to_string();
    let mut swap = |key: &str, options: &[&str], rng: &mut R| {
        if s.contains(key) {
            s = s.replace(key, options.choose(rng).expect("non-empty"));
        }
    };
    swap("{day}", DAYS, rng);
    swap("{rel}", RELATIVES, rng);
    swap("{event}", EVENTS, rng);
    swap("{time}", TIMES, rng);
    swap("{brand}", BRANDS, rng);
    swap("{place}", PLACES, rng);
    let n = rng.gen_range(2..12).to_string();
    let pct = format!("{}%", rng.gen_range(3..40));
    s = s.replace("{n}", &n).replace("{pct}", &pct).replace("{city}", city).replace("{state}", state);
    s
}

fn with_fillers<R: Rng>(mut s: String, rng: &mut R) -> String {
    for _ in 0..rng.gen_range(0..3) {
        s.push(' ');
        s.push_str(FILLERS.choose(rng).expect("non-empty"));
    }
    s
}

pub(crate) fn first_person<R: Rng>(topic: Topic, rng: &mut R, city: &str, state: &str) -> String {
    let t = match topic {
        Topic::Flu => FLU_FIRST_PERSON,
        Topic::Unemployment => JOB_FIRST_PERSON,
    };
    with_fillers(fill(t.choose(rng).expect("non-empty"), rng, city, state), rng)
}

pub(crate) fn other<R: Rng>(topic: Topic, rng: &mut R, city: &str, state: &str) -> String {
    let t = match topic {
        Topic::Flu => FLU_OTHER,
        Topic::Unemployment => JOB_OTHER,
    };
    let s = fill(t.choose(rng).expect("non-empty"), rng, city, state);
    if rng.gen_bool(0.3) {
        format!("{s} http://t.co/{:x}", rng.gen::<u32>())
    } else {
        s
    }
}

pub(crate) fn chatter<R: Rng>(rng: &mut R, city: &str) -> String {
    with_fillers(fill(CHATTER.choose(rng).expect("non-empty"), rng, city, ""), rng)
}

pub(crate) fn baseline<R: Rng>(rng: &mut R) -> String {
    fill(BASELINE.choose(rng).expect("non-empty"), rng, "", "")
}

pub(crate) const FEMALE_NAMES: &[&str] = &[
    "Mary", "Jennifer", "Linda", "Sarah", "Jessica", "Emily", "Ashley", "Amanda", "Megan", "Rachel", "Laura", "Hannah",
    "Olivia", "Emma", "Sophia", "Grace", "Chloe", "Natalie", "Lauren", "Nicole",
];
pub(crate) const MALE_NAMES: &[&str] = &[
    "James", "John", "Robert", "Michael", "David", "William", "Daniel", "Matthew", "Joshua", "Andrew", "Ryan", "Tyler",
    "Kevin", "Brian", "Jacob", "Ethan", "Nathan", "Kyle", "Eric", "Justin",
];
pub(crate) const AMBIGUOUS_NAMES: &[&str] = &["Jordan", "Taylor", "Casey", "Alex", "Morgan", "Jamie", "Riley", "Avery"];
pub(crate) const NICKNAMES: &[&str] = &["xoxo kat", "DJ Spinz", "the real deal", "sunshine", "coffee addict", "gamer4life", "~wanderer~"];
pub(crate) const SURNAMES: &[&str] = &["Smith", "Johnson", "Williams", "Brown", "Jones", "Miller", "Davis", "Garcia", "Wilson", "Moore", "Lee", "Clark"];
pub(crate) const ORG_WORDS: &[&str] = &["Health", "News", "Daily", "Pharmacy", "Clinic", "Times", "Wellness", "Jobs", "Careers", "Report"];
pub(crate) const PERSONAL_BIOS: &[&str] = &[
    "mom of two, coffee lover",
    "student. music. sarcasm.",
    "just trying my best",
    "dog person, runner, foodie",
    "living my best life",
    "teacher by day, reader by night",
];
pub(crate) const ORG_BIOS: &[&str] = &["Official account. News and updates.", "Your trusted local health source", "Breaking news 24/7", "Career advice and job listings"];
pub(crate) const BOT_BIOS: &[&str] = &["Best deals online!! follow for more", "FREE stuff every day", "Click the link for offers", "#deals #promo #sale"];
