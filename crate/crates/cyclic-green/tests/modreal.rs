use cyclic_green::fplinalg::{MatrixFp, PrimeField};
use cyclic_green::modreal::{decompose, direct_sum, exterior_power, indecomposable, symmetric_power, tensor, ModuleRep};
use cyclic_green::{GreenContext, GreenElement, Order};
use proptest::prelude::*;

const CAP: usize = 60_000;

fn orders() -> impl Strategy<Value = (u32, u32)> {
    prop::sample::select(vec![(2u32, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)])
}

fn module_from_blocks(order: Order, sizes: &[usize]) -> ModuleRep {
    let mut m = indecomposable(order, sizes[0]).unwrap();
    for &s in &sizes[1..] {
        m = direct_sum(&m, &indecomposable(order, s).unwrap()).unwrap();
    }
    m
}

fn blocks_element(order: Order, sizes: &[usize]) -> GreenElement {
    let mut c = vec![0i64; order.q];
    for &s in sizes {
        c[s - 1] += 1;
    }
    GreenElement::from_coeffs(order, c).unwrap()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn regular_module_as_permutation_matrix() {
    for (p, e) in [(2, 2), (3, 1), (2, 3), (5, 1)] {
        let order = Order::new(p, e).unwrap();
        let q = order.q;
        let perm = MatrixFp::from_fn(PrimeField::new(p).unwrap(), q, q, |i, j| i64::from(i == (j + 1) % q));
        let m = ModuleRep::from_matrix(order, &perm).unwrap();
        assert_eq!(decompose(&m).unwrap(), GreenElement::basis(order, q).unwrap());
    }
}

#[test]
fn non_unipotent_generator_is_rejected() {
    let order = Order::new(2, 1).unwrap();
    let g = MatrixFp::from_fn(PrimeField::new(2).unwrap(), 2, 2, |i, j| i64::from(i == j || (i == 0 && j == 1) || (i == 1 && j == 0)));
    assert!(ModuleRep::from_matrix(order, &g).is_err());
}

proptest! {
    #[test]
    fn direct_sums_decompose_blockwise((p, e) in orders(), raw in prop::collection::vec(1usize..20, 1..5)) {
        let order = Order::new(p, e).unwrap();
        let sizes: Vec<usize> = raw.iter().map(|s| (s - 1) % order.q + 1).collect();
        prop_assert_eq!(decompose(&module_from_blocks(order, &sizes)).unwrap(), blocks_element(order, &sizes));
    }

    #[test]
    fn tensor_is_commutative_and_matches_ring_product((p, e) in orders(), a in 1usize..20, b in 1usize..20) {
        let order = Order::new(p, e).unwrap();
        let (a, b) = ((a - 1) % order.q + 1, (b - 1) % order.q + 1);
        let (va, vb) = (indecomposable(order, a).unwrap(), indecomposable(order, b).unwrap());
        let ab = decompose(&tensor(&va, &vb, CAP).unwrap()).unwrap();
        prop_assert_eq!(&ab, &decompose(&tensor(&vb, &va, CAP).unwrap()).unwrap());
        prop_assert_eq!(ab.dimension(), (a * b) as i128);
        let ctx = GreenContext::new(p, e).unwrap();
        prop_assert_eq!(ab, ctx.tensor_basis(a, b).unwrap());
    }

    #[test]
    fn exterior_powers_are_palindromic((p, e) in orders(), r in 1usize..10, j in 0usize..10) {
        let order = Order::new(p, e).unwrap();
        let r = (r - 1) % order.q + 1;
        let j = j % (r + 1);
        let v = indecomposable(order, r).unwrap();
        let lo = decompose(&exterior_power(&v, j, CAP).unwrap()).unwrap();
        let hi = decompose(&exterior_power(&v, r - j, CAP).unwrap()).unwrap();
        prop_assert_eq!(lo.dimension(), binomial(r, j) as i128);
        prop_assert_eq!(lo, hi);
    }

    #[test]
    fn exterior_power_of_sum_splits((p, e) in orders(), a in 1usize..5, b in 1usize..5, n in 0usize..6) {
        let order = Order::new(p, e).unwrap();
        let (a, b) = ((a - 1) % order.q + 1, (b - 1) % order.q + 1);
        let (va, vb) = (indecomposable(order, a).unwrap(), indecomposable(order, b).unwrap());
        let whole = decompose(&exterior_power(&direct_sum(&va, &vb).unwrap(), n, CAP).unwrap()).unwrap();
        let mut sum = GreenElement::zero(order);
        for i in 0..=n {
            let t = tensor(&exterior_power(&va, i, CAP).unwrap(), &exterior_power(&vb, n - i, CAP).unwrap(), CAP).unwrap();
            sum = sum.add(&decompose(&t).unwrap()).unwrap();
        }
        prop_assert_eq!(whole, sum);
    }

    #[test]
    fn symmetric_power_of_sum_splits((p, e) in orders(), a in 1usize..5, b in 1usize..5, n in 0usize..6) {
        let order = Order::new(p, e).unwrap();
        let (a, b) = ((a - 1) % order.q + 1, (b - 1) % order.q + 1);
        let (va, vb) = (indecomposable(order, a).unwrap(), indecomposable(order, b).unwrap());
        let whole = decompose(&symmetric_power(&direct_sum(&va, &vb).unwrap(), n, CAP).unwrap()).unwrap();
        prop_assert_eq!(whole.dimension(), binomial(a + b + n - 1, n) as i128);
        let mut sum = GreenElement::zero(order);
        for i in 0..=n {
            let t = tensor(&symmetric_power(&va, i, CAP).unwrap(), &symmetric_power(&vb, n - i, CAP).unwrap(), CAP).unwrap();
            sum = sum.add(&decompose(&t).unwrap()).unwrap();
        }
        prop_assert_eq!(whole, sum);
    }
}
