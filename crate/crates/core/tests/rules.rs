//! Structural properties of generated rules: exactness on polynomials,
//! positivity, interlacing, symmetry and the root residual.

use gqtab_core::moments::{cosine_moment, log_moment, total_mass};
use gqtab_core::orthopoly::{normalize, RecurrenceTable};
use gqtab_core::rulegen::{generate_rule, generate_rules};
use gqtab_core::{BigNum, Kernel, PrecisionPolicy, QuadratureRule};

fn policy(initial: u32) -> PrecisionPolicy {
    PrecisionPolicy::with_defaults(initial, 30).unwrap()
}

fn moment(kernel: Kernel, k: u32, digits: u32) -> BigNum {
    match kernel {
        Kernel::LogPower(m) => BigNum::from_rational(&log_moment(k, m), digits),
        Kernel::Cosine if k % 2 == 1 => BigNum::zero(digits),
        Kernel::Cosine => cosine_moment(k, digits).unwrap(),
    }
}

fn worst_moment_residual(rule: &QuadratureRule) -> f64 {
    let wd = rule.working_digits();
    let scale = total_mass(rule.kernel(), wd).unwrap().max(BigNum::one(wd));
    (0..2 * rule.len() as u32)
        .map(|k| {
            let got = rule.apply(|x| Ok::<_, String>(x.powi(k))).unwrap();
            let err = (&(&got - &moment(rule.kernel(), k, wd)) / &scale).abs();
            if err.is_zero() {
                f64::NEG_INFINITY
            } else {
                err.log10_abs()
            }
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

const KERNELS: [Kernel; 4] = [
    Kernel::LogPower(1),
    Kernel::LogPower(2),
    Kernel::LogPower(3),
    Kernel::Cosine,
];

#[test]
fn polynomials_up_to_degree_2n_minus_1_are_exact() {
    for kernel in KERNELS {
        for (n, r) in generate_rules(kernel, &[3, 10, 20], &policy(120)).unwrap() {
            let r = r.unwrap();
            let worst = worst_moment_residual(&r);
            assert!(worst < -f64::from(r.working_digits() - 10), "{kernel} N={n}: 10^{worst}");
        }
    }
}

#[test]
fn weights_are_positive_and_sum_to_the_mass() {
    for kernel in KERNELS {
        let r = generate_rule(kernel, 15, &policy(100)).unwrap();
        assert!(r.weights().iter().all(BigNum::is_positive));
        let wd = r.working_digits();
        let sum = r.weights().iter().fold(BigNum::zero(wd), |a, w| &a + w);
        let mass = total_mass(kernel, wd).unwrap();
        assert!((&(&sum - &mass) / &mass).abs().log10_abs() < -f64::from(wd - 10));
    }
}

#[test]
fn nodes_interlace_between_consecutive_n() {
    for kernel in KERNELS {
        let ns: Vec<usize> = (1..=14).collect();
        let rules: Vec<QuadratureRule> = generate_rules(kernel, &ns, &policy(80))
            .unwrap()
            .into_iter()
            .map(|(_, r)| r.unwrap())
            .collect();
        for pair in rules.windows(2) {
            let (small, big) = (pair[0].nodes(), pair[1].nodes());
            for (i, x) in small.iter().enumerate() {
                assert!(&big[i] < x && x < &big[i + 1], "{kernel} N={}", small.len());
            }
        }
    }
}

#[test]
fn cosine_rules_are_symmetric() {
    for n in [1usize, 2, 7, 12] {
        let r = generate_rule(Kernel::Cosine, n, &policy(80)).unwrap();
        let (x, w) = (r.nodes(), r.weights());
        for i in 0..n {
            assert_eq!(x[i], -&x[n - 1 - i]);
            assert_eq!(w[i], w[n - 1 - i]);
        }
        assert_eq!(n % 2 == 1, x.iter().any(BigNum::is_zero));
    }
}

#[test]
fn nodes_are_roots_of_the_normalized_polynomial() {
    for kernel in [Kernel::LogPower(2), Kernel::Cosine] {
        let n = 12;
        let r = generate_rule(kernel, n, &policy(100)).unwrap();
        let wd = r.working_digits();
        let table = RecurrenceTable::at_precision(kernel, n, wd).unwrap();
        let p = normalize(&table.polynomial(n).unwrap(), &table.norms()[n], wd).unwrap();
        let biggest = p.coeffs().iter().map(BigNum::abs).max().unwrap();
        for x in r.nodes() {
            let res = p.evaluate(x).abs();
            assert!(res.is_zero() || (&res / &biggest).log10_abs() <= -f64::from(wd - 10), "{kernel}");
        }
    }
}

#[test]
fn closed_form_two_node_log_rule() {
    // p_{2,1} = x² − 5/7 x + 17/252
    let d = 90;
    let r = generate_rule(Kernel::LogPower(1), 2, &policy(d)).unwrap();
    let wd = r.working_digits();
    let c = |n: i64, k: i64| &BigNum::from_i64(n, wd) / &BigNum::from_i64(k, wd);
    let disc = (&(&c(5, 7) * &c(5, 7)) - &(&BigNum::from_i64(4, wd) * &c(17, 252))).sqrt().unwrap();
    let two = BigNum::from_i64(2, wd);
    let roots = [&(&c(5, 7) - &disc) / &two, &(&c(5, 7) + &disc) / &two];
    for (x, e) in r.nodes().iter().zip(&roots) {
        assert!((x - e).abs().log10_abs() < -f64::from(wd - 5));
    }
}

#[test]
fn batch_and_single_generation_agree() {
    let p = policy(90);
    let batch = generate_rules(Kernel::LogPower(1), &[9, 4], &p).unwrap();
    for (n, r) in batch {
        assert_eq!(r.unwrap(), generate_rule(Kernel::LogPower(1), n, &p).unwrap());
    }
}
