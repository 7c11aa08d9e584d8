use super::{record, Context, SuiteOutput};
use crate::report::{CheckRecord, Comparison};
use foliation_core::random::seeded;
use foliation_core::wiener_hopf::{
    cayley_gram, finite_section_kernel_counts, generator_loop, gram_defect, index_report, line_nodes,
    toeplitz_finite_section, IndexReport, LineFunction, SymbolLoop,
};
use num_complex::Complex64;
use rand::Rng;
use serde_json::json;
use std::f64::consts::PI;

const GENERATOR: &str = "the boundary map of the Wiener-Hopf extension sends [1 - b] to -1";
const TOEPLITZ: &str = "the Toeplitz index is minus the winding number of the symbol";
const CAYLEY: &str = "the phase-corrected Cayley transform is unitary and maps Hardy space onto Hardy space";
const FOURIER_TOL: f64 = 1e-8;
const LOOP_SAMPLES: usize = 2048;

pub fn run(ctx: &Context) -> std::io::Result<SuiteOutput> {
    let cfg = ctx.config;
    let max_res = cfg.tolerances.winding_residual;
    let mut checks = vec![];
    let mut reports: Vec<IndexReport> = vec![];

    match generator_loop(LOOP_SAMPLES).and_then(|l| index_report(&l, max_res).map(|r| (l, r))) {
        Ok((l, r)) => {
            checks.push(CheckRecord::equals("1 - b: winding number", GENERATOR, r.winding as f64, 1.0));
            checks.push(CheckRecord::equals("1 - b: boundary index", GENERATOR, r.boundary_index as f64, -1.0));
            checks.push(CheckRecord::at_most("1 - b: argument residual", "plumbing", r.residual, max_res));
            let nodes = line_nodes(LOOP_SAMPLES);
            ctx.dump("generator_loop.csv", |w| {
                w.extend_from_slice(b"t,re,im\n");
                for (t, z) in nodes.iter().zip(l.values()) {
                    w.extend_from_slice(format!("{t:e},{:e},{:e}\n", z.re, z.im).as_bytes());
                }
                Ok(())
            })?;
            reports.push(r);
        }
        Err(e) => checks.push(CheckRecord::errored("1 - b: index", GENERATOR, Comparison::Equals, -1.0, e)),
    }

    let b = LineFunction::wiener_hopf_generator();
    let fourier = (-200..=200).try_fold(0.0f64, |acc, j| {
        let s = 0.05 * j as f64;
        let exact = Complex64::new(1.0, 0.0) / Complex64::new(0.5, 2.0 * PI * s);
        Ok(acc.max((b.fourier(s)? - exact).norm()))
    });
    checks.push(record("b-hat quadrature against 1/(1/2 + 2 pi i s)", GENERATOR, Comparison::AtMost, FOURIER_TOL, fourier));

    for n in -2..=2i32 {
        let name = format!("z^{n}: Toeplitz index");
        let r = SymbolLoop::circle_from_fn(256, |z| z.powi(n))
            .map(|l| l.with_label(format!("z^{n}")))
            .and_then(|l| index_report(&l, max_res));
        match r {
            Ok(r) => {
                checks.push(CheckRecord::equals(&name, TOEPLITZ, r.boundary_index as f64, -(n as f64)));
                reports.push(r);
            }
            Err(e) => checks.push(CheckRecord::errored(&name, TOEPLITZ, Comparison::Equals, -(n as f64), e)),
        }
    }

    let mut rng = seeded(cfg.seed);
    let mut additive = 0.0f64;
    for _ in 0..cfg.trials {
        let factors = rng.gen_range(1..=3);
        let mut total = 0i64;
        let mut product = SymbolLoop::circle_from_fn(512, |_| Complex64::new(1.0, 0.0)).expect("512 samples");
        for _ in 0..factors {
            let a = Complex64::from_polar(rng.gen_range(0.0..0.6), rng.gen_range(0.0..2.0 * PI));
            let inverse = rng.gen_bool(0.5);
            let blaschke = SymbolLoop::circle_from_fn(512, |z| {
                let w = (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z);
                if inverse {
                    w.inv()
                } else {
                    w
                }
            })
            .expect("512 samples");
            total += if inverse { -1 } else { 1 };
            product = product.mul(&blaschke).expect("same sampling");
        }
        let w = product.winding_number(max_res).map(|w| w.winding).unwrap_or(i64::MAX);
        additive = additive.max((w - total).unsigned_abs() as f64);
    }
    checks.push(CheckRecord::equals("winding is additive over Blaschke products", TOEPLITZ, additive, 0.0));

    let shift = SymbolLoop::circle_from_fn(128, |z| z).and_then(|l| toeplitz_finite_section(&l, 50));
    let counts = shift.as_ref().map(|s| finite_section_kernel_counts(s, 1e-10));
    let dims = counts.as_ref().map(|c| c.0 as f64).map_err(|e| foliation_core::Error::InvalidArgument(e.to_string()));
    checks.push(
        record("shift section N=50: kernel dimension", "plumbing", Comparison::Equals, 1.0, dims)
            .with_note("a truncation artifact of finite sections; the index of record is the winding number"),
    );
    let invertible = SymbolLoop::circle_from_fn(128, |z| z + 2.0).and_then(|l| toeplitz_finite_section(&l, 50));
    let dims = invertible.map(|s| {
        let c = finite_section_kernel_counts(&s, 1e-10);
        (c.0 + c.1) as f64
    });
    checks.push(record("2 + z section N=50: kernel plus cokernel", "plumbing", Comparison::Equals, 0.0, dims));

    let gram = gram_defect(&cayley_gram(&[0, 1, 2, 3, 4, 5], 10.0, 200));
    checks.push(CheckRecord::at_most("Gram matrix of six Cayley basis images", CAYLEY, gram, cfg.tolerances.quadrature));
    let mixed = gram_defect(&cayley_gram(&[0, 1, -1, -2], 10.0, 200));
    checks.push(CheckRecord::at_most("Hardy and anti-Hardy images are orthogonal", CAYLEY, mixed, cfg.tolerances.quadrature));

    Ok(SuiteOutput { checks, data: json!({ "index_reports": reports }) })
}
