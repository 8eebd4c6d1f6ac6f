//! Bisimulation games and apartness proofs for finite labelled transition
//! systems.
//!
//! Two states are *apart* when a finite derivation shows that one can make a
//! move the other cannot match. This crate computes apartness and
//! bisimilarity (strong and branching) as fixed points, solves the
//! corresponding Spoiler/Duplicator games, and converts between Spoiler's
//! winning strategies and apartness proofs in both directions.
//!
//! ```
//! use apart_core::{fixtures, build_proof, check_proof, GameKind};
//!
//! let lts = fixtures::fig1();
//! let x0 = lts.state_by_name("x0").unwrap();
//! let y0 = lts.state_by_name("y0").unwrap();
//! let proof = build_proof(&lts, GameKind::Strong, x0, y0).unwrap();
//! assert_eq!(proof.depth(), 2);
//! assert!(check_proof(&lts, GameKind::Strong, &proof).valid);
//! ```

pub mod aut;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod invariants;
pub mod lts;
pub mod proof;
pub mod random;
pub mod relation;
pub mod session;
pub mod solver;

pub use aut::{parse_aut, parse_aut_with, write_aut, AutOptions};
pub use error::{AutError, GameError, LtsError, ProofError};
pub use game::{
    all_pairs, build_branching_game, build_game, build_strong_game, ConfigId, GameConfig, GameGraph, GameKind, Move,
    MoveKind, Player,
};
pub use lts::{Diagnostics, LabelId, Lts, LtsBuilder, StateId, Transition};
pub use proof::{
    bisimulation_witness, build_proof, build_proof_with, check_proof, proof_to_strategy, strategy_to_proof,
    ApartnessProof, CheckResult, Disjunct, ProofDocument, Reply, Subgoal,
};
pub use relation::{
    apartness, bisimilarity, branching_apartness, branching_bisimilarity, strong_apartness, strong_bisimilarity,
    Relation, RelationWithLevels,
};
pub use session::{Session, SessionError, SessionStatus};
pub use solver::{check_determinacy, enumerate_plays, solve, Play, PlayOutcome, Solution, Strategy};
