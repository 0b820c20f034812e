//! Deliberately corrupted identities. Each mutation swaps one side of one
//! property for a plausible wrong variant; a working suite must catch it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::suite::Suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Translation law with `∨` in place of `∧` on the right.
    MeetAsJoin,
    /// Birkhoff inequality against `a − b` instead of `|a − b|`.
    BirkhoffSigned,
    /// `x ∧ (y + z) = x ∧ y + x ∧ z` without the disjointness hypothesis.
    SubadditiveEquality,
    /// Riesz decomposition by the greedy rule `y₁ = x ∧ y`.
    GreedyRiesz,
    /// Infinite band read off the first truncation mask only.
    TruncationFirstMask,
    /// `(x + y)^∞` compared with `x^∞ ∧ y^∞`.
    InfinitePartOfSumAsMeet,
    /// Product expansion without the `x^∞ y^f` term.
    DropCrossTerm,
    /// `x(y ∧ z)` compared with `xy ∨ xz`.
    ProductMeetAsJoin,
    /// Closed-form series missing its first term.
    SeriesSkipFirstTerm,
    /// `limsup` compared with the window minimum.
    LimsupAsLiminf,
    /// Conditional expectation as an unweighted block average.
    UnweightedAverage,
    /// Divergence band of `Σ T P_n e` compared with `liminf P_n`.
    Bcl2Liminf,
    /// First passage at `x_n ≥ K` instead of `x_n > K`.
    PassageAtLevel,
    /// Stopped process keeping `(P_n − P_{n−1})^d` live instead of `P_{n−1}^d`.
    StopLiveBandTypo,
}

impl Mutation {
    pub const ALL: [Mutation; 14] = [
        Mutation::MeetAsJoin,
        Mutation::BirkhoffSigned,
        Mutation::SubadditiveEquality,
        Mutation::GreedyRiesz,
        Mutation::TruncationFirstMask,
        Mutation::InfinitePartOfSumAsMeet,
        Mutation::DropCrossTerm,
        Mutation::ProductMeetAsJoin,
        Mutation::SeriesSkipFirstTerm,
        Mutation::LimsupAsLiminf,
        Mutation::UnweightedAverage,
        Mutation::Bcl2Liminf,
        Mutation::PassageAtLevel,
        Mutation::StopLiveBandTypo,
    ];

    /// The property the mutation corrupts.
    pub fn target(self) -> (Suite, &'static str) {
        match self {
            Mutation::MeetAsJoin => (Suite::ConeAxioms, "translation-meet"),
            Mutation::BirkhoffSigned => (Suite::ConeAxioms, "birkhoff-inequality"),
            Mutation::SubadditiveEquality => (Suite::ConeAxioms, "meet-subadditive"),
            Mutation::GreedyRiesz => (Suite::ConeAxioms, "riesz-decomposition"),
            Mutation::TruncationFirstMask => (Suite::BandsDecomposition, "truncation-band"),
            Mutation::InfinitePartOfSumAsMeet => (Suite::BandsDecomposition, "infinite-part-sum"),
            Mutation::DropCrossTerm => (Suite::Multiplication, "product-infinite-part"),
            Mutation::ProductMeetAsJoin => (Suite::Multiplication, "product-distributes-meet"),
            Mutation::SeriesSkipFirstTerm => (Suite::Convergence, "series-brute-force"),
            Mutation::LimsupAsLiminf => (Suite::Convergence, "limsup-window"),
            Mutation::UnweightedAverage => (Suite::Expectation, "block-average"),
            Mutation::Bcl2Liminf => (Suite::BorelCantelli, "bcl2"),
            Mutation::PassageAtLevel => (Suite::Martingales, "tau-k-partition"),
            Mutation::StopLiveBandTypo => (Suite::Martingales, "stopped-second-form"),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Mutation::MeetAsJoin => "meet-as-join",
            Mutation::BirkhoffSigned => "birkhoff-signed",
            Mutation::SubadditiveEquality => "subadditive-equality",
            Mutation::GreedyRiesz => "greedy-riesz",
            Mutation::TruncationFirstMask => "truncation-first-mask",
            Mutation::InfinitePartOfSumAsMeet => "infinite-part-of-sum-as-meet",
            Mutation::DropCrossTerm => "drop-cross-term",
            Mutation::ProductMeetAsJoin => "product-meet-as-join",
            Mutation::SeriesSkipFirstTerm => "series-skip-first-term",
            Mutation::LimsupAsLiminf => "limsup-as-liminf",
            Mutation::UnweightedAverage => "unweighted-average",
            Mutation::Bcl2Liminf => "bcl2-liminf",
            Mutation::PassageAtLevel => "passage-at-level",
            Mutation::StopLiveBandTypo => "stop-live-band-typo",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}
