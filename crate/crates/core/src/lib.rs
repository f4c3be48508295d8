//! Complementation of nondeterministic Büchi automata through
//! codeterministic run DAGs.

pub mod algorithm;
pub mod bitset;
pub mod classify;
pub mod error;
pub mod explore;
pub mod fixtures;
mod graph;
pub mod io;
pub mod lang;
pub mod lasso;
pub mod ldbw;
pub mod nbw;
pub mod rank;
pub mod run_dag;
pub mod slice;

pub use algorithm::{complement, contains, Algorithm};
pub use bitset::StateSet;
pub use classify::{classify, ldbw_partition, maximal_ldbw_partition, ClassificationReport, LdbwPartition};
pub use error::{Error, Result};
pub use explore::Complement;
pub use lasso::LassoWord;
pub use ldbw::{ldbw_codet_dag, nsbc_complement, LdbwDag, NsbcMacrostate};
pub use nbw::{Nbw, State, Symbol};
pub use rank::{covering_rankings, rank_subsumes, rkc_complement, RankMacrostate, RankMode};
pub use run_dag::{analyze_dag, classical_ranks, lasso_dag, reduced_successors, DagMode, DagReport, LassoDag};
pub use slice::{disambiguate, slc_complement_fa, slc_subsumes, slice_successor, Slice, SliceMacrostate};
