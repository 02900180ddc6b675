//! Expression parser and evaluator on arbitrary input. Parsing must never
//! panic; printed trees must reparse to the identical tree; evaluation of
//! whatever parses must terminate without panicking.

#![no_main]

use enneper::algebra::{AlgebraKind, TwoComponentNumber};
use enneper::expr::{eval_jet, parse};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(tree) = parse(text) else { return };
    let printed = tree.to_string();
    let reparsed = parse(&printed).expect("printed tree must reparse");
    assert_eq!(reparsed, tree, "print/parse round trip diverged");
    for kind in [AlgebraKind::Circular, AlgebraKind::Hyperbolic] {
        let _ = eval_jet(&tree, TwoComponentNumber::new(0.3, -0.4, kind));
        let _ = eval_jet(&tree, TwoComponentNumber::new(1.0, 1.0, kind));
    }
});
