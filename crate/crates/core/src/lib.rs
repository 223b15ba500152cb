//! Social-sensor signal construction and now-casting evaluation.
//!
//! The crate turns a line-delimited tweet corpus into weekly per-cohort
//! signals, fits lagged regressions against an offline series and scores
//! them with a rolling/extending split protocol.
//!
//! Modules follow the data flow:
//!
//! - [`corpus`]: parsing, keyword matching, spam filtering, weekly unique-user counts
//! - [`demographics`]: gender, age bucket and state inference, penetration rates
//! - [`firstperson`]: n-gram vocabulary, random forest classifier, evaluation
//! - [`cohorts`]: user filters, activity and geographic weighting, subsampling
//! - [`nowcast`]: lagged / ARDL design matrices and least-squares fitting
//! - [`backtest`]: split plans, APE/MAPE, cohort comparison
//! - [`stats`]: correlations, rank tests, multiple regression summaries
//! - [`synth`]: deterministic synthetic scenarios

pub mod backtest;
pub mod cohorts;
pub mod corpus;
pub mod demographics;
pub mod firstperson;
pub mod nowcast;
pub mod seed;
pub mod stats;
pub mod synth;

pub use corpus::{TweetRecord, UserProfile, WeekGrid, WeeklySignal};
