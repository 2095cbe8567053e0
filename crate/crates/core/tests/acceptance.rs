//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. All comparisons are exact; only the
//! runtime bounds below are tolerances.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cyclohom::complex::{dihedral_image, subcomplex_ka, subcomplex_kt, DihedralElement};
use cyclohom::duality::{dual_pair, plucker_check};
use cyclohom::exactlinalg::{cokernel_invariants, rank, smith_normal_form, HomologySummary, IntMatrix};
use cyclohom::numtheory::{euler_phi, primitive_residues, squarefree_primes, squarefree_up_to};
use cyclohom::polynomial::{cyclotomic, primitive_basis_determinant, root_coordinate_matrix};
use cyclohom::verify::{self, pair_cycle, reconstruct_from_homology, Status, VerifyOptions};

use common::{big, gcd_of_minors, oracle_cyclotomic};

const GOLDEN_LIMIT: Duration = Duration::from_secs(1);
const MAIN_SWEEP_LIMIT: Duration = Duration::from_secs(5 * 60);
const SCALE_PROBE_LIMIT: Duration = Duration::from_secs(10 * 60);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn d_of(n: u64) -> isize {
    squarefree_primes(n).unwrap().len() as isize
}

fn single(n: u64, j: u64) -> cyclohom::complex::HomologyProfile {
    subcomplex_ka(n, &BTreeSet::from([j])).unwrap().homology_profile()
}

fn z() -> HomologySummary {
    HomologySummary { free_rank: 1, torsion: vec![] }
}

fn golden_n15() -> Outcome {
    let start = Instant::now();
    let f = cyclotomic(15).map_err(|e| e.to_string())?;
    ensure(f.coeffs() == &big(&[1, -1, 0, 1, -1, 1, 0, -1, 1])[..], || format!("Phi_15 = {f}"))?;
    ensure(single(15, 5).degree(0).is_trivial(), || "H_0(K_{5}) nonzero".into())?;
    ensure(single(15, 7).degree(0).is_trivial(), || "H_0(K_{7}) nonzero".into())?;
    let h6 = single(15, 6);
    ensure(h6.degree(0) == z() && h6.degree(1) == z(), || format!("K_{{6}}: {:?}", h6.groups))?;
    let same = pair_cycle(15, 7, 8).map_err(|e| e.to_string())?;
    ensure(same.b_j.signum() == same.b_j_prime.signum() && !same.b_j.is_zero(), || {
        format!("(7,8): b = {}, {}", same.b_j, same.b_j_prime)
    })?;
    let opp = pair_cycle(15, 5, 8).map_err(|e| e.to_string())?;
    ensure(opp.b_j.signum() == -opp.b_j_prime.signum() && !opp.b_j.is_zero(), || {
        format!("(5,8): b = {}, {}", opp.b_j, opp.b_j_prime)
    })?;
    let t = start.elapsed();
    ensure(t < GOLDEN_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("{t:.2?}"))
}

fn main_sweep() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for n in squarefree_up_to(105) {
        let c = oracle_cyclotomic(n);
        let d = d_of(n);
        for j in 0..=euler_phi(n) {
            let h = single(n, j);
            let cj = c[j as usize];
            let low = h.degree(d - 2);
            let order_ok = if cj == 0 {
                low == z()
            } else {
                low.free_rank == 0 && low.torsion_order() == BigInt::from(cj.abs())
            };
            let top_ok = h.degree(d - 1).free_rank == usize::from(cj == 0) && h.degree(d - 1).torsion.is_empty();
            ensure(order_ok && top_ok, || format!("n = {n}, j = {j}, c_j = {cj}: {:?}", h.groups))?;
            count += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < MAIN_SWEEP_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("{count} complexes, {t:.2?}"))
}

fn sign_sweep() -> Outcome {
    let mut count = 0;
    for n in squarefree_up_to(105) {
        let rebuilt = reconstruct_from_homology(n).map_err(|e| format!("n = {n}: {e}"))?;
        ensure(rebuilt.coeffs() == &big(&oracle_cyclotomic(n))[..], || format!("n = {n}: rebuilt {rebuilt}"))?;
        count += 1;
    }
    Ok(format!("{count} polynomials"))
}

fn torsion_105() -> Outcome {
    let h = single(105, 7).degree(1);
    ensure(h == HomologySummary { free_rank: 0, torsion: vec![BigInt::from(2)] }, || format!("got {h}"))?;
    Ok(h.to_string())
}

fn random_t(n: u64, rng: &mut ChaCha8Rng) -> BTreeSet<u64> {
    sample(rng, n as usize, (n - euler_phi(n)) as usize).into_iter().map(|x| x as u64).collect()
}

fn kt_randomized() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(58);
    for n in [15u64, 21, 33, 35] {
        let m = root_coordinate_matrix(n).unwrap();
        let d = d_of(n);
        let phi = euler_phi(n) as usize;
        for _ in 0..100 {
            let t = random_t(n, &mut rng);
            let tc: Vec<usize> = (0..n).filter(|x| !t.contains(x)).map(|x| x as usize).collect();
            let restricted = m.restrict(&tc);
            let lattice = cokernel_invariants(&restricted);
            let h = subcomplex_kt(n, &t).unwrap().homology_profile();
            let top = HomologySummary { free_rank: phi - rank(&restricted), torsion: vec![] };
            let rest = (-1..d - 2).all(|i| h.degree(i).is_trivial());
            ensure(h.degree(d - 2) == lattice && h.degree(d - 1) == top && rest, || {
                format!("n = {n}, T = {t:?}: simplicial {:?} vs lattice {lattice}", h.groups)
            })?;
        }
    }
    Ok("400 subsets".into())
}

fn basis_and_acyclic() -> Outcome {
    let mut count = 0;
    for n in squarefree_up_to(210) {
        let det = primitive_basis_determinant(n).unwrap();
        ensure(det.abs() == BigInt::from(1), || format!("n = {n}: det {det}"))?;
        let prim: BTreeSet<u64> = primitive_residues(n).into_iter().collect();
        let t: BTreeSet<u64> = (0..n).filter(|x| !prim.contains(x)).collect();
        let h = subcomplex_kt(n, &t).unwrap().homology_profile();
        ensure(h.support().is_empty(), || format!("n = {n}: {:?}", h.groups))?;
        count += 1;
    }
    Ok(format!("{count} values of n"))
}

fn plucker_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut count = 0;
    for n in squarefree_up_to(35) {
        let pair = dual_pair(n).map_err(|e| format!("n = {n}: {e}"))?;
        for _ in 0..50 {
            let t = random_t(n, &mut rng);
            let rec = plucker_check(&pair, &t).unwrap();
            ensure(rec.holds(), || format!("n = {n}, T = {t:?}: {rec:?}"))?;
            count += 1;
        }
    }
    for _ in 0..500 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let m: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let snf = smith_normal_form(&IntMatrix::from_rows(&m), false);
        let mut prod = BigInt::from(1);
        for (k, dk) in snf.diagonal.iter().enumerate() {
            prod *= dk;
            ensure(prod == BigInt::from(gcd_of_minors(&m, k + 1)), || format!("{m:?}: {:?}", snf.diagonal))?;
        }
    }
    Ok(format!("{count} minor pairs, 500 matrices"))
}

fn attaching_sweep() -> Outcome {
    let opts = VerifyOptions::default();
    let mut count = 0;
    for n in squarefree_up_to(105).filter(|&n| d_of(n) >= 2) {
        let c = oracle_cyclotomic(n);
        let r = verify::verify_attaching(n, &opts).unwrap();
        ensure(r.passed(), || format!("n = {n}: {}", verify::reports_to_text(std::slice::from_ref(&r))))?;
        for j in 0..=euler_phi(n) {
            let w = &r.case(&format!("j={j}")).unwrap().witness;
            ensure(w["coefficient"].as_str() == Some(c[j as usize].to_string().as_str()), || format!("n = {n}, j = {j}: {w}"))?;
        }
        ensure(r.case("coboundary").unwrap().status == Status::Pass, || format!("n = {n}: coboundary"))?;
        count += 1;
    }
    Ok(format!("{count} values of n"))
}

fn symmetry_identities() -> Outcome {
    for n in squarefree_up_to(255).filter(|&n| d_of(n) == 2) {
        ensure(oracle_cyclotomic(n).iter().all(|c| c.abs() <= 1), || format!("n = {n}"))?;
        ensure(cyclotomic(n).unwrap().coeffs().iter().all(|c| c.abs() <= BigInt::from(1)), || format!("n = {n}"))?;
    }
    for n in squarefree_up_to(210) {
        let phi = euler_phi(n);
        let c = oracle_cyclotomic(n);
        ensure((0..=phi as usize).all(|j| c[j] == c[phi as usize - j]), || format!("palindromy n = {n}"))?;
        let t = DihedralElement::coefficient_involution(n);
        for j in 0..=phi {
            let src = subcomplex_ka(n, &BTreeSet::from([j])).unwrap().facet_residues().unwrap();
            let dst = subcomplex_ka(n, &BTreeSet::from([phi - j])).unwrap().facet_residues().unwrap();
            ensure(dihedral_image(n, t, &src).unwrap() == dst, || format!("dihedral n = {n}, j = {j}"))?;
        }
    }
    let opts = VerifyOptions::default();
    for n in squarefree_up_to(105).filter(|n| n % 2 == 1) {
        let (c, c2) = (oracle_cyclotomic(n), oracle_cyclotomic(2 * n));
        ensure(
            c.iter().enumerate().all(|(j, &x)| c2[j] == if j % 2 == 0 { x } else { -x }),
            || format!("negation n = {n}"),
        )?;
        let r = verify::verify_symmetries(n, &opts).unwrap();
        let suspensions = r.cases.iter().filter(|c| c.id.starts_with("suspension")).count();
        ensure(r.passed() && suspensions == euler_phi(n) as usize + 1, || {
            format!("n = {n}: {}", verify::reports_to_text(std::slice::from_ref(&r)))
        })?;
    }
    Ok("migotti <= 255, dihedral <= 210, suspension <= 105".into())
}

fn scale_probe() -> Outcome {
    let start = Instant::now();
    let c = oracle_cyclotomic(210);
    ensure(d_of(210) == 4 && euler_phi(210) == 48, || "210 is not a d = 4 case with phi = 48".into())?;
    for j in [0u64, 7, 24, 48] {
        let h = single(210, j);
        let cj = c[j as usize];
        let low = h.degree(2);
        let ok = if cj == 0 { low == z() && h.degree(3) == z() } else { low == HomologySummary::cyclic(&BigInt::from(cj)) && h.degree(3).is_trivial() };
        ensure(ok && (-1..2).all(|i| h.degree(i).is_trivial()), || format!("j = {j}, c_j = {cj}: {:?}", h.groups))?;
    }
    let t = start.elapsed();
    ensure(t < SCALE_PROBE_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("{t:.2?}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("golden n = 15", golden_n15),
        ("torsion order = |c_j| for squarefree n <= 105", main_sweep),
        ("sign reconstruction for squarefree n <= 105", sign_sweep),
        ("n = 105, H_1(K_{7}) = Z/2", torsion_105),
        ("K[T] homology = lattice cokernel, 100 random T for n in {15, 21, 33, 35}", kt_randomized),
        ("primitive basis unimodular, K[P^c] acyclic, n <= 210", basis_and_acyclic),
        ("complementary minors and SNF oracle", plucker_suite),
        ("attaching coefficients and coboundary, n <= 105", attaching_sweep),
        ("Migotti, dihedral, palindromy, suspension", symmetry_identities),
        ("scale probe n = 210", scale_probe),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
