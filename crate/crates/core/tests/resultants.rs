use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, Zero};
use steiner_core::linalg::bareiss_det;
use steiner_core::poly::{HomogeneousForm, Monomial};
use steiner_core::resultant::{
    resultant_exact, resultant_mod_prime, resultant_zero_certify, MacaulayResultantProblem, OutcomeMode,
    ResultantOptions, ZeroCheck,
};
use steiner_core::steiner::gradient_system;
use steiner_core::{Normalization, Tree};

fn forms(tree: &Tree, k: u32, norm: Normalization) -> Vec<HomogeneousForm> {
    gradient_system(tree, k).unwrap().forms_with(norm)
}

fn exact(tree: &Tree, k: u32, norm: Normalization) -> BigInt {
    let p = MacaulayResultantProblem::assemble_preconditioned(forms(tree, k, norm), 7).unwrap();
    resultant_exact(&p, &ResultantOptions::default()).unwrap().value.unwrap()
}

/// Sylvester determinant of two binary forms of equal degree `d`, coefficient
/// of `x0^(d-j) x1^j` in column `j`.
fn sylvester(f: &HomogeneousForm, g: &HomogeneousForm) -> BigInt {
    let d = f.degree() as usize;
    let coeffs = |h: &HomogeneousForm| -> Vec<BigInt> {
        (0..=d).map(|j| h.coefficient(&Monomial::new(vec![(d - j) as u32, j as u32]))).collect()
    };
    let (a, b) = (coeffs(f), coeffs(g));
    let size = 2 * d;
    let mut m = vec![vec![BigInt::zero(); size]; size];
    for shift in 0..d {
        m[shift][shift..=shift + d].clone_from_slice(&a);
        m[d + shift][shift..=shift + d].clone_from_slice(&b);
    }
    bareiss_det(m)
}

#[test]
fn single_edge_matches_sylvester_oracle() {
    let edge = Tree::path(2).unwrap();
    for k in 3..=8 {
        for norm in [Normalization::Unscaled, Normalization::FullDp] {
            let f = forms(&edge, k, norm);
            let expected = sylvester(&f[0], &f[1]).abs();
            assert_eq!(exact(&edge, k, norm).abs(), expected, "k={k} {norm}");
        }
    }
}

#[test]
fn single_edge_order_four_full_gradient() {
    let edge = Tree::path(2).unwrap();
    let value = exact(&edge, 4, Normalization::FullDp);
    assert_eq!(value, BigInt::from(-114_688));
    let p = MacaulayResultantProblem::assemble_preconditioned(forms(&edge, 4, Normalization::FullDp), 7).unwrap();
    let (residue, _) = resultant_mod_prime(&p, 101).unwrap();
    // 114688 = 53 (mod 101), so the signed value sits at 101 - 53
    assert_eq!(BigInt::from(residue), value.mod_floor(&BigInt::from(101)));
    assert_eq!(residue, 48);
    assert_eq!(exact(&edge, 4, Normalization::Unscaled), BigInt::from(-28));
}

#[test]
fn single_edge_order_three() {
    let edge = Tree::path(2).unwrap();
    assert_eq!(exact(&edge, 3, Normalization::FullDp).abs(), BigInt::from(243));
    assert_eq!(exact(&edge, 3, Normalization::Unscaled).abs(), BigInt::from(3));
}

#[test]
fn linear_gradients() {
    let edge = Tree::path(2).unwrap();
    assert_eq!(exact(&edge, 2, Normalization::Unscaled), BigInt::from(-1));
    assert_eq!(exact(&edge, 2, Normalization::FullDp), BigInt::from(-4));
}

#[test]
fn odd_order_paths_certify_zero() {
    for (n, k) in [(3, 3), (3, 5), (4, 3)] {
        let tree = Tree::path(n).unwrap();
        let p = MacaulayResultantProblem::assemble_preconditioned(forms(&tree, k, Normalization::Unscaled), 1).unwrap();
        match resultant_zero_certify(&p, &ResultantOptions::default()).unwrap() {
            ZeroCheck::Zero(o) => {
                assert_eq!(o.mode, OutcomeMode::ZeroCertificate);
                assert!(o.proves_zero());
            }
            ZeroCheck::NotZero(o) => panic!("path n={n} k={k} reported {:?}", o.value),
        }
    }
}

#[test]
fn relabeling_preserves_the_resultant() {
    let base = Tree::new(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
    let reference = exact(&base, 4, Normalization::Unscaled);
    for perm in [[1, 0, 2, 3], [3, 2, 1, 0], [2, 3, 0, 1]] {
        let relabeled = base.relabeled(&perm).unwrap();
        assert_eq!(exact(&relabeled, 4, Normalization::Unscaled), reference, "{perm:?}");
    }
}
