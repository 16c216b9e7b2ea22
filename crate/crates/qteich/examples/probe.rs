use qteich::coeff::{mutate_coefficients, CoefficientTuple};
use qteich::dilog::random_fermat_point;
use qteich::linop::{CyclicOperator, StateSpace};
use qteich::rep::{move_operator, Realization};
use qteich::root::RootData;
use qteich::surface::{apply_move, builtin_surface, exchange_matrix, MoveKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let rd = RootData::new(5, 1e-9).unwrap();
    let start = builtin_surface("pentagon_disk").unwrap();
    let space = StateSpace::new(&rd, &[0, 1, 2]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let word_op = |word: &[(usize, usize, usize)], tuple0: &CoefficientTuple| {
        let mut state = start.clone();
        let mut tuple = tuple0.clone();
        let mut v = CyclicOperator::identity(&space);
        for &(a, b, edge) in word {
            let kind = MoveKind::Flip { v: a, w: b, edge };
            let p = tuple.get(edge).unwrap();
            let op = move_operator(&rd, &space, kind, Some(&p), Realization::Standard).unwrap();
            v = v.mul(&op);
            tuple = mutate_coefficients(&rd, &exchange_matrix(&state), &tuple, edge).unwrap();
            state = apply_move(&state, kind).unwrap().after;
        }
        v
    };
    let mut closed = 0;
    let total = 12;
    for _ in 0..total {
        let mut tuple = CoefficientTuple::new();
        for e in start.edge_ids() {
            tuple.insert(e, random_fermat_point(&rd, &mut rng));
        }
        let v3 = word_op(&[(0, 1, 6), (0, 2, 7), (1, 2, 6)], &tuple);
        let v2 = word_op(&[(1, 2, 7), (0, 1, 6)], &tuple);
        let d = v3.distance(&v2) / v3.frobenius();
        println!("defect {d:.3e}");
        if d <= 1e-9 {
            closed += 1;
        }
    }
    println!("closed {closed}/{total}");
}
