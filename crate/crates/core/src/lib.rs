//! Pattern matching on Wheeler generalized automata with epsilon edges.
//!
//! An automaton whose edges carry strings is indexed into a handful of
//! sorted tables and two marker bitvectors. Queries return the interval of
//! states (in Wheeler order) reached by walks spelling strings suffixed by
//! the pattern, in time proportional to the pattern length times the longest
//! label.
//!
//! ```
//! use wgnfa::{ten_state_example, WheelerIndex};
//!
//! let ix = WheelerIndex::build(&ten_state_example(), true).unwrap();
//! let hit = ix.query(b"a").unwrap();
//! assert_eq!((hit.lo, hit.hi), (2, 5));
//! assert_eq!(hit.accepted, Some(false));
//! ```

pub mod batch;
pub mod bits;
pub mod closure;
pub mod gnfa;
pub mod index;
pub mod matcher;
pub mod oracle;

pub use batch::{match_batch, match_batch_sequential};
pub use closure::{build_closure_arrays, build_marker_bits, ClosureError, EpsilonClosureArrays, MarkerBits};
pub use gnfa::{
    ten_state_example, four_state_example, parse_gnfa, validate, Edge, GeneralizedAutomaton, Label, ModelError,
    ValidationReport,
};
pub use index::{FormatError, IndexError, WheelerIndex};
pub use matcher::{MatchError, MatchTrace, QueryResult};
