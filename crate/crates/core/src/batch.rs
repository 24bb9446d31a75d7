//! Many patterns against one index.
//!
//! With the `parallel` feature (on by default) patterns are spread over the
//! rayon pool; otherwise [`match_batch`] is the sequential loop. Results
//! keep the input order either way.

use crate::index::WheelerIndex;
use crate::matcher::{MatchError, QueryResult};

/// Answers every pattern with [`WheelerIndex::query`].
#[cfg(feature = "parallel")]
pub fn match_batch<P>(ix: &WheelerIndex, patterns: &[P]) -> Vec<Result<QueryResult, MatchError>>
where
    P: AsRef<[u8]> + Sync,
{
    use rayon::prelude::*;
    patterns.par_iter().map(|p| ix.query(p.as_ref())).collect()
}

/// Answers every pattern with [`WheelerIndex::query`].
#[cfg(not(feature = "parallel"))]
pub fn match_batch<P>(ix: &WheelerIndex, patterns: &[P]) -> Vec<Result<QueryResult, MatchError>>
where
    P: AsRef<[u8]> + Sync,
{
    match_batch_sequential(ix, patterns)
}

/// Single-threaded reference for [`match_batch`].
pub fn match_batch_sequential<P>(
    ix: &WheelerIndex,
    patterns: &[P],
) -> Vec<Result<QueryResult, MatchError>>
where
    P: AsRef<[u8]>,
{
    patterns.iter().map(|p| ix.query(p.as_ref())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gnfa::ten_state_example;

    #[test]
    fn batch_agrees_with_sequential() {
        let ix = WheelerIndex::build(&ten_state_example(), true).unwrap();
        let patterns: Vec<Vec<u8>> = ["a", "ba", "cba", "", "bba", "c", "zz"]
            .iter()
            .map(|s| s.as_bytes().to_vec())
            .collect();
        assert_eq!(
            match_batch(&ix, &patterns),
            match_batch_sequential(&ix, &patterns)
        );
        let bad = [vec![b'a', 0x01]];
        assert!(match_batch(&ix, &bad)[0].is_err());
    }
}
