// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#[path = "support/golden.rs"]
mod golden;

use std::time::{Duration, Instant};

use ncalg::centrality::{
    all_univariate, assert_linear_bijection, centrality_scan, scan_endomorphisms, surjectivity_probe, UnivariateForm,
};
use ncalg::classifier::{
    check_idempotent_system, classify_map, factor_semi_inner, solve_mul_coeffs, tabulate, verify_category_automorphism,
    verify_uuv, ClassificationResult, MulCoeffs, Verdict, ViolationKind, WordMap,
};
use ncalg::morphisms::{commutator_ideal_member, kernel_intersection_probe, KernelProbeBank, ProbeOutcome};
use ncalg::random::{self, TestRng};
use ncalg::{Field, FieldAut, NcPoly, SemiLinearMap, Word};
use rand::Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

type Check = fn() -> Outcome;

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn mirror_laws() -> Outcome {
    let mut failures = 0;
    let mut checked = 0;
    for (seed, field) in [(1, Field::rationals()), (2, Field::prime(5).unwrap())] {
        let mut rng = random::rng(seed);
        for _ in 0..1000 {
            let p = random::poly(&mut rng, &field, 2, 6, 6);
            let q = random::poly(&mut rng, &field, 2, 6, 6);
            checked += 1;
            if (&p * &q).mirror() != &q.mirror() * &p.mirror() || p.mirror().mirror() != p {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("{checked} pairs over Q and GF(5), {failures} failures"))
}

/// All polynomials in W(x, y) over GF(2) with degree ≤ 3, in binary order.
fn all_gf2_polys<'a>(words: &'a [Word], f2: &Field) -> impl Iterator<Item = NcPoly> + 'a {
    let one = f2.one();
    let f2 = f2.clone();
    (0u32..1 << words.len()).map(move |mask| {
        NcPoly::from_terms(
            &f2,
            2,
            words.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, w)| (w.clone(), one.clone())),
        )
    })
}

fn kernel_oracle() -> Outcome {
    let f2 = Field::prime(2).unwrap();
    let words = Word::all_up_to(2, 3);
    let mut bank = KernelProbeBank::exhaustive(&f2, 3).unwrap();
    let (mut total, mut members, mut mismatches) = (0, 0, 0);
    for p in all_gf2_polys(&words, &f2) {
        total += 1;
        let member = commutator_ideal_member(&p);
        members += usize::from(member);
        let killed = bank.probe(&p).unwrap() == ProbeOutcome::AllKilled;
        if member != killed {
            mismatches += 1;
        }
    }

    let q = Field::rationals();
    let mut rng = random::rng(22);
    let (mut sampled, mut witnessed) = (0, 0);
    while sampled < 100 {
        let p = random::poly(&mut rng, &q, 2, 4, 5);
        if p.abelianize().is_zero() {
            continue;
        }
        sampled += 1;
        let seed = rng.gen();
        if let ProbeOutcome::Witness(s) = kernel_intersection_probe(&p, 50, 3, seed).unwrap() {
            if !s.apply(&p).unwrap().is_zero() {
                witnessed += 1;
            }
        }
    }
    outcome(
        mismatches == 0 && witnessed == sampled,
        format!(
            "GF(2): {total} polynomials x {} morphisms, {members} members, {mismatches} mismatches; Q: {witnessed}/{sampled} witnessed",
            bank.len()
        ),
    )
}

fn idempotent_system() -> Outcome {
    let mut bad = Vec::new();
    for q in [2, 3, 4, 5] {
        let f = Field::gf(q).unwrap();
        let elems = f.elements().unwrap();
        let mut admitted = Vec::new();
        for a in &elems {
            for b in &elems {
                if check_idempotent_system(&MulCoeffs::new(a.clone(), b.clone())) {
                    admitted.push(MulCoeffs::new(a.clone(), b.clone()));
                }
            }
        }
        let expected = vec![MulCoeffs::anti(&f), MulCoeffs::hom(&f)];
        let sorted = |mut v: Vec<MulCoeffs>| {
            v.sort_by_key(|c| (c.a.index(), c.b.index()));
            v
        };
        if sorted(admitted) != sorted(expected) || check_idempotent_system(&MulCoeffs::new(f.zero(), f.zero())) {
            bad.push(q);
        }
    }
    outcome(bad.is_empty(), format!("q in {{2,3,4,5}}: admissible = {{(1,0),(0,1)}}, failing fields {bad:?}"))
}

fn factor_round_trip() -> Outcome {
    let f4 = Field::gf(4).unwrap();
    let settings = [(Field::rationals(), false), (f4.clone(), false), (f4, true)];
    let (mut cases, mut failures) = (0, Vec::new());
    for (which, (field, frob)) in settings.iter().enumerate() {
        let mut rng = random::rng(400 + which as u64);
        let count = if which == 0 { 200 } else { 100 };
        for i in 0..count {
            cases += 1;
            let alpha = if *frob { FieldAut::frobenius(field) } else { FieldAut::identity(field) };
            let mirror = rng.gen_bool(0.5);
            let family: Vec<WordMap> = (1..=2)
                .map(|n| tabulate(&random::semilinear(&mut rng, field, n, alpha.clone(), mirror), 4))
                .collect();
            let words_ok = family[1].table().len() == 31;
            let verdict = classify_map(&family[1].twist(&alpha.inverse()).unwrap()).map(|r| r.verdict);
            let fac = factor_semi_inner(&family);
            let ok = words_ok
                && verdict == Ok(if mirror { Verdict::AntiHom } else { Verdict::Hom })
                && fac.as_ref().is_ok_and(|f| f.mirror == mirror && f.verified && f.alpha == alpha);
            if !ok {
                failures.push(format!("{field}/{i}"));
            }
        }
    }
    outcome(failures.is_empty(), format!("{cases} maps (200 over Q, 200 over GF(4)), failures {failures:?}"))
}

/// Certificate recomputed from the table.
fn certificate_is_valid(mu: &WordMap, r: &ClassificationResult) -> bool {
    let Some(cert) = &r.certificate else { return false };
    if cert.defect.is_zero() {
        return false;
    }
    let (u, v) = (mu.get(&cert.u), mu.get(&cert.v));
    let uv = mu.get(&cert.u.concat(&cert.v));
    match &r.coeffs {
        Some(c) => {
            let expected = &(u * v).scalar_mul(&c.a).unwrap() + &(v * u).scalar_mul(&c.b).unwrap();
            cert.defect == uv - &expected
        }
        None => cert.defect == uv - &(u * v) || cert.defect == uv - &(v * u),
    }
}

fn adversarial_suite() -> Vec<WordMap> {
    let fields = [Field::rationals(), Field::prime(3).unwrap(), Field::gf(4).unwrap(), Field::prime(5).unwrap()];
    let perturbations = ["x", "y*y", "1", "x*x*y", "x + y"];
    let mut rng: TestRng = random::rng(500);
    let mut suite = Vec::new();
    for (i, field) in fields.iter().enumerate() {
        for (j, delta) in perturbations.iter().enumerate() {
            let mirror = (i + j) % 2 == 1;
            let base = tabulate(&random::semilinear(&mut rng, field, 2, FieldAut::identity(field), mirror), 4);
            let mut table = base.table().clone();
            let xy = Word::from_letters([1, 2]);
            let delta = NcPoly::parse(delta, field, 2).unwrap().scalar_mul(&random::nonzero_scalar(&mut rng, field)).unwrap();
            let entry = &table[&xy] + &delta;
            table.insert(xy, entry);
            suite.push(WordMap::new(base.alpha().clone(), 2, 4, table).unwrap());
        }
    }
    suite
}

fn negative_classification() -> Outcome {
    let suite = adversarial_suite();
    let mut detected = 0;
    for mu in &suite {
        let defect_outside = {
            let x = mu.get(&Word::letter(1));
            let y = mu.get(&Word::letter(2));
            !commutator_ideal_member(&(mu.get(&Word::from_letters([1, 2])) - &(x * y)))
        };
        if let Ok(r) = classify_map(mu) {
            if defect_outside && r.verdict == Verdict::Neither && certificate_is_valid(mu, &r) {
                detected += 1;
            }
        }
    }
    let q = Field::rationals();
    let half = q.from_i64(1).try_div(&q.from_i64(2)).unwrap();
    let mid = WordMap::from_fn(FieldAut::identity(&q), 2, 4, |u| {
        let p = NcPoly::word(&q, 2, u.clone());
        (&p + &p.mirror()).scalar_mul(&half).unwrap()
    })
    .unwrap();
    let c = solve_mul_coeffs(&mid).unwrap();
    let mid_ok = c == MulCoeffs::new(half.clone(), half) && !check_idempotent_system(&c) && !verify_uuv(&mid, &c).unwrap();
    let mid_verdict = classify_map(&mid).is_ok_and(|r| r.verdict == Verdict::Neither && certificate_is_valid(&mid, &r));
    outcome(
        detected == suite.len() && mid_ok && mid_verdict,
        format!(
            "{detected}/{} adversarial maps detected; midpoint (1/2,1/2) rejected by idempotent system and uuv check: {}",
            suite.len(),
            mid_ok && mid_verdict
        ),
    )
}

fn centrality() -> Outcome {
    let f2 = Field::prime(2).unwrap();
    let f3 = Field::prime(3).unwrap();
    let names = |r: &ncalg::centrality::ScanReport| r.survivors.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let s2 = centrality_scan(&f2, 2, 2, &scan_endomorphisms(&f2, 0)).unwrap();
    let s3 = centrality_scan(&f3, 2, 2, &scan_endomorphisms(&f3, 0)).unwrap();
    let affine3: Vec<String> = all_univariate(&f3, 1)
        .unwrap()
        .into_iter()
        .filter(|r| r.is_linear())
        .map(|r| r.to_string())
        .collect();
    let mut got3 = names(&s3);
    let mut want3 = affine3.clone();
    got3.sort();
    want3.sort();
    let k2_ok = s2.passed() && names(&s2) == ["t", "1 + t"] && s3.passed() && got3 == want3 && got3.len() == 6;

    let deep_ok = [&f2, &f3].iter().all(|f| centrality_scan(f, 4, 1, &scan_endomorphisms(f, 1)).unwrap().passed());

    let mut disagreements = 0;
    let forms: Vec<UnivariateForm> = all_univariate(&f2, 3).unwrap();
    for r in &forms {
        if assert_linear_bijection(r).is_ok() != surjectivity_probe(r, &f2, 2).unwrap() {
            disagreements += 1;
        }
    }
    outcome(
        k2_ok && deep_ok && disagreements == 0,
        format!(
            "GF(2) k=2 survivors {:?}; GF(3) k=2 survivors {}; k=4 scans pass: {deep_ok}; {} forms of degree <= 3 over GF(2), {disagreements} disagreements",
            names(&s2),
            s3.survivors.len(),
            forms.len()
        ),
    )
}

fn functoriality() -> Outcome {
    let q = Field::rationals();
    let f4 = Field::gf(4).unwrap();
    let mut rng = random::rng(700);
    let mut uniform_ok = true;
    let mut summary = Vec::new();
    for (field, alpha, mirror) in [
        (q.clone(), FieldAut::identity(&q), false),
        (q.clone(), FieldAut::identity(&q), true),
        (f4.clone(), FieldAut::frobenius(&f4), true),
    ] {
        let family: Vec<SemiLinearMap> =
            (1..=3).map(|n| random::semilinear(&mut rng, &field, n, alpha.clone(), mirror)).collect();
        let r = verify_category_automorphism(&family, 100, 2, 7).unwrap();
        uniform_ok &= r.passed() && r.composition_checks == 100;
        summary.push(r.violations.len());
    }
    let mirrors: Vec<SemiLinearMap> = (1..=3).map(|n| SemiLinearMap::pure_mirror(&q, n)).collect();
    let mirror_report = verify_category_automorphism(&mirrors, 100, 2, 8).unwrap();
    let mixed = vec![SemiLinearMap::pure_mirror(&q, 2), SemiLinearMap::identity(&q, 3)];
    let mixed_report = verify_category_automorphism(&mixed, 100, 2, 9).unwrap();
    let mixed_detected = mixed_report.violations.iter().any(|v| v.kind == ViolationKind::NotAMorphism);
    outcome(
        uniform_ok && mirror_report.passed() && mixed_detected,
        format!(
            "random uniform families: violations {summary:?}; all-mirror family: {} violations; mixed family: {} violations",
            mirror_report.violations.len(),
            mixed_report.violations.len()
        ),
    )
}

fn cli_golden() -> Outcome {
    let mismatches = golden::mismatches();
    let counts = golden::subcommand_counts();
    let thin: Vec<_> = counts.iter().filter(|(_, &n)| n < 3).map(|(s, _)| s.clone()).collect();
    let examples = [
        ("member-comm-1", "member: true\n[exit 0]\n"),
        ("mirror-1", "y*x + 2*y*x*x\n[exit 0]\n"),
        ("classify-1", "verdict: ANTIHOM coeffs: (0,1)\n[exit 0]\n"),
    ];
    let examples_ok = examples.iter().all(|(name, want)| golden::expected(name).as_deref() == Some(*want));
    outcome(
        mismatches.is_empty() && thin.is_empty() && counts.len() == 12 && examples_ok,
        format!(
            "{} transcripts over {} subcommands, mismatches {mismatches:?}, under-covered {thin:?}",
            golden::cases().len(),
            counts.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, Check, u64); 8] = [
        ("mirror laws", mirror_laws, 10),
        ("commutator ideal vs kernel oracle", kernel_oracle, 60),
        ("idempotent coefficient system", idempotent_system, 1),
        ("semi-inner factorization round trip", factor_round_trip, 60),
        ("negative classification", negative_classification, 5),
        ("central bijections are affine", centrality, 120),
        ("functoriality of conjugation", functoriality, 30),
        ("cli golden transcripts", cli_golden, 10),
    ];
    let mut all_ok = true;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let ok = result.ok && in_time;
        all_ok &= ok;
        println!(
            "criterion {} [{}] {name}: {} ({:.2} s, limit {limit} s) {}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            if result.ok { "checks hold" } else { "checks failed" },
            elapsed.as_secs_f64(),
            result.detail
        );
    }
    if !all_ok {
        std::process::exit(1);
    }
}
