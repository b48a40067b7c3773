use basen_core::arith::{is_prime, primes_in};
use basen_core::charsums::{
    bernoulli_identities, c_k, c_k_direct, linear_system_n3, mat_vec, matrix_rank, row_sums,
    sigma_res, CharPair, SigmaTable, MATRIX_A, NULL_VECTOR,
};

const MODULI_N: [u64; 8] = [3, 7, 11, 15, 19, 23, 35, 43];

fn grid(m_max: u64) -> Vec<CharPair> {
    let mut out = Vec::new();
    for n in MODULI_N {
        for m in primes_in(5, m_max).into_iter().filter(|m| m % 4 == 1 && n % m != 0) {
            out.push(CharPair::new(n, m).unwrap());
        }
    }
    out
}

#[test]
fn bernoulli_identities_hold_on_grid() {
    for pair in grid(400) {
        for id in bernoulli_identities(&pair) {
            assert!(id.holds(), "{} fails for n={}, m={}: {} vs {}", id.name, pair.n(), pair.m(), id.lhs, id.rhs);
        }
    }
}

#[test]
fn c_k_has_period_n() {
    for pair in grid(200) {
        let n = pair.n() as i64;
        for alpha in [-1i8, 0, 1] {
            for k in 0..3 * n {
                assert_eq!(c_k(&pair, k, alpha).unwrap(), c_k(&pair, k + n, alpha).unwrap());
            }
        }
    }
}

#[test]
fn sigma_table_matches_direct_count() {
    for pair in grid(300) {
        let table = SigmaTable::residue(&pair);
        let mut total = 0;
        for a in 0..pair.n() {
            for alpha in [-1i8, 0, 1] {
                assert_eq!(table.res(a, alpha), sigma_res(&pair, a, alpha));
                total += table.res(a, alpha);
            }
        }
        assert_eq!(total, pair.m());
        assert_eq!((0..pair.n()).map(|a| table.res(a, 0)).sum::<u64>(), 1);
    }
}

#[test]
fn row_sums_deviate_only_where_class_size_drops() {
    let mut deviating = 0;
    for pair in grid(2000) {
        let (n, m) = (pair.n(), pair.m());
        for row in row_sums(&SigmaTable::residue(&pair)) {
            let class = (1..m).filter(|l| l % n == row.a).count() as u64;
            assert_eq!(row.observed, class);
            if row.observed != row.printed {
                deviating += 1;
                // Observed sums count 1 ≤ l < m only, so a short class is off by one.
                assert_eq!(row.printed, row.observed + 1, "n={n} m={m} a={}", row.a);
            }
        }
    }
    assert!(deviating > 0);
}

#[test]
fn n3_symmetry_and_linear_system() {
    assert_eq!(matrix_rank(&MATRIX_A), 3);
    assert_eq!(mat_vec(&MATRIX_A, &NULL_VECTOR), [0; 4]);
    let ms: Vec<u64> = (5..20_000).filter(|m| m % 12 == 5 && is_prime(*m)).collect();
    assert!(ms.len() > 500);
    for m in ms {
        let pair = CharPair::new(3, m).unwrap();
        let table = SigmaTable::residue(&pair);
        let report = linear_system_n3(&pair, &table).unwrap();
        assert!(report.symmetric, "m={m}");
        assert!(report.c1_vanishes, "m={m}");
        assert_eq!(c_k_direct(&pair, 1, 1), 0);
        // The second row is off by one on every tuple: σ(1,1) + σ(1,-1) = (m+1)/3.
        assert_eq!(report.residuals(), [0, 1, 0, 0], "m={m}");
        assert_eq!(report.x[2] + report.x[3], (m as i64 + 1) / 3);
    }
}
