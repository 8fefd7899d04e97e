mod common;

use proptest::prelude::*;
use rauzy_core::subst::{abelianize, parse_substitution_set, Letter, Word};

fn word(d: u8, max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(0..d, 0..max)
}

proptest! {
    #[test]
    fn morphism_property(u in word(3, 40), v in word(3, 40), which in 0usize..2) {
        let set = common::tribonacci();
        let s = set.get(which);
        let uv: Vec<Letter> = u.iter().chain(&v).copied().collect();
        prop_assert_eq!(s.apply(&uv), s.apply(&u).concat(&s.apply(&v)));
    }

    #[test]
    fn abelianization_commutes_with_incidence(u in word(3, 60), which in 0usize..2) {
        let set = common::tribonacci();
        let s = set.get(which);
        let lhs = abelianize(&s.apply(&u), 3).unwrap();
        let rhs = set.matrix(which).checked_mul_vec(&abelianize(&u, 3).unwrap().0).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn prefix_table_reassembles_images(which in 0usize..2) {
        let set = common::sturmian();
        let s = set.get(which);
        for e in s.prefix_suffix_table() {
            let mut w = e.prefix.clone();
            w.push(e.pivot);
            w.extend_from(&e.suffix);
            prop_assert_eq!(&w, s.image(e.letter_in));
            prop_assert_eq!(e.prefix.len() + 1, e.position);
        }
    }
}

#[test]
fn shipped_files_parse() {
    let t = common::tribonacci();
    assert_eq!(t.len(), 2);
    assert!(t.shared_matrix().is_some());
    let s = common::sturmian();
    assert!(s.shared_matrix().is_none());
    let fib = parse_substitution_set(include_str!("../../../data/fibonacci.subs")).unwrap();
    assert_eq!(fib.subs.len(), 2);
}

#[test]
fn image_power_example() {
    let set = common::tribonacci();
    let s2 = set.get(1);
    let a = Word::from_letters(vec![0]);
    let w = s2.apply(&s2.apply(&s2.apply(&a)));
    assert_eq!(w.display(set.alphabet()).to_string(), "abcaaab");
}
