//! Exact matching solvers.

mod lp;
mod matching;

pub use lp::{
    has_perfect_fractional_matching, max_fractional_matching, max_fractional_matching_with, trivial_cap,
    FractionalCover, FractionalMatching, FractionalSolution, LpCaps,
};
pub(crate) use matching::masks_have_matching;
pub use matching::{find_matching_of_size, matching_number, max_matching};

use crate::error::{ensure, Result};
use crate::hypergraph::{Hypergraph, Matching};

/// Perfect-matching decision. `Some(witness)` when one exists.
pub fn has_perfect_matching(h: &Hypergraph) -> Result<Option<Matching>> {
    ensure!(h.k() >= 1, "uniformity must be at least 1");
    ensure!(
        h.n().is_multiple_of(h.k()),
        "k = {} does not divide n = {}",
        h.k(),
        h.n()
    );
    Ok(find_matching_of_size(h, h.n() / h.k()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_has_perfect_matching() {
        let h = Hypergraph::complete(6, 3).unwrap();
        let m = has_perfect_matching(&h).unwrap().unwrap();
        assert_eq!(m.size(), 2);
        assert!(m.is_valid_in(&h));
        assert!(has_perfect_matching(&Hypergraph::complete(7, 3).unwrap()).is_err());
    }
}
