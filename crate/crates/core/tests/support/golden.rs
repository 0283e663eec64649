//! Golden presentations shared by the integration tests.

#![allow(dead_code)]

use polygraph_core::rewriting::{complete, encode, CompletionLimits, CompletionOutcome, RewritingSystem};
use polygraph_core::{parse, Polygraph};

pub const Z5: &str = "< a | a^5 = 1 >";
pub const D5: &str = "< r, s | r^5 = 1, s^2 = 1, r s r s = 1 >";
pub const Q8: &str = "< i, j | i = j i j, j = i j i >";
pub const BRAID3: &str = "< a, b | a b a = b a b >";
pub const BRAID3_C: &str = "< a, b, c | a b a = b a b, a c = c b, c = b a >";

/// The finite golden groups with their orders.
pub const FINITE: [(&str, usize); 3] = [(Z5, 5), (D5, 10), (Q8, 8)];

/// Parses and completes a presentation that is known to converge.
pub fn converged(text: &str) -> (Polygraph, RewritingSystem) {
    let p = parse(text).unwrap();
    let (s, _) = encode(&p, None, false).unwrap();
    match complete(&s, CompletionLimits::default()).unwrap() {
        CompletionOutcome::Converged(s) => (p, s),
        CompletionOutcome::GaveUp { reason, .. } => panic!("{text}: {reason}"),
    }
}
