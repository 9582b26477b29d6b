//! Randomized algebraic properties of the field, permutation and lattice layers.

use proptest::prelude::*;

use btstrat::coxeter::{chain_bounds, chain_product, decompose_chain, Perm};
use btstrat::field::{Field, FieldSpec, Fq};
use btstrat::strata::concrete::window_vertices;
use btstrat::strata::{enumerate_abstract, ParahoricTuple};

fn field_spec() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(FieldSpec::new(3, 1, 1)), Just(FieldSpec::new(3, 1, 2)), Just(FieldSpec::new(5, 1, 1)), Just(FieldSpec::new(3, 2, 1))]
}

fn permutation(max_degree: usize) -> impl Strategy<Value = Perm> {
    (1..=max_degree).prop_flat_map(|n| Just((1..=n).collect::<Vec<usize>>()).prop_shuffle()).prop_map(|images| Perm::from_one_line(&images).unwrap())
}

proptest! {
    #[test]
    fn field_axioms(spec in field_spec(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = Field::new(spec).unwrap();
        let pick = |x: u32| f.elements().nth((x % f.size()) as usize).unwrap();
        let (a, b, c) = (pick(a), pick(b), pick(c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius_pow(a, i64::from(f.spec().degree())), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a)), f.from_int(1));
        }
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert!(f.add(a, f.neg(a)) == Fq::ZERO);
    }

    #[test]
    fn permutation_lengths_and_bruhat(sigma in permutation(7)) {
        let n = sigma.degree();
        prop_assert_eq!(sigma.inverse().length(), sigma.length());
        prop_assert!(sigma.compose(&sigma.inverse()).is_identity());
        prop_assert!(Perm::identity(n).bruhat_leq(&sigma));
        prop_assert!(sigma.bruhat_leq(&Perm::longest(n)));
        prop_assert_eq!(sigma.length() + sigma.compose(&Perm::longest(n)).length(), n * (n - 1) / 2);
    }

    #[test]
    fn chain_products_decompose(n in 2usize..=7, mask in any::<u32>(), seeds in proptest::collection::vec(any::<usize>(), 7)) {
        let mask = mask % (1 << (n - 1));
        prop_assume!(mask != 0);
        let gaps: Vec<usize> = (0..n - 1).filter(|g| mask >> g & 1 == 1).collect();
        let bounds = chain_bounds(n, &gaps);
        let ts: Vec<usize> = bounds.iter().zip(&seeds).map(|(&b, &s)| s % (b + 1)).collect();
        let sigma = chain_product(n, &gaps, &ts);
        prop_assert_eq!(decompose_chain(&sigma, &gaps).unwrap(), Some(ts));
    }

    #[test]
    fn window_index_additivity(n in 1usize..=3, parity in 0usize..2, a in any::<usize>(), b in any::<usize>()) {
        prop_assume!(parity <= n);
        let tuple = ParahoricTuple::new(n, vec![parity]).unwrap();
        let amb = tuple.ambient(3, 1, 1).unwrap();
        let vertices = window_vertices(&amb).unwrap();
        let (x, y) = (&vertices[a % vertices.len()].lattice, &vertices[b % vertices.len()].lattice);
        let (sum, meet) = (amb.sum(x, y), amb.intersect(x, y));
        prop_assert_eq!(amb.index_in(x, &sum).unwrap(), amb.index_in(&meet, y).unwrap());
        prop_assert_eq!(amb.dual(&amb.dual(x).unwrap()).unwrap(), x.clone());
        prop_assert!(amb.contains(&amb.dual(&meet).unwrap(), &amb.dual(&sum).unwrap()));
    }

    #[test]
    fn abstract_order_is_partial(n in 1usize..=6, choice in any::<usize>()) {
        let tuples = ParahoricTuple::all(n);
        let tuple = &tuples[choice % tuples.len()];
        let all = enumerate_abstract(tuple);
        for a in &all {
            prop_assert!(a.leq(a));
            for b in &all {
                if a != b && a.leq(b) {
                    prop_assert!(!b.leq(a));
                    for c in &all {
                        if b.leq(c) {
                            prop_assert!(a.leq(c));
                        }
                    }
                }
            }
        }
    }
}
