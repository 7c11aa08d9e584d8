use super::{record, relative, Context, SuiteOutput};
use crate::report::Comparison;
use foliation_core::coeff_ring::{ConvolutionMethod, GaussPolyFn, GridFn};
use foliation_core::random::{gauss_poly, seeded};
use foliation_core::Result;
use serde_json::json;

const RING: &str = "convolution makes the Gaussian-polynomial functions a commutative algebra";
const AUTOMORPHISM: &str = "multiplication by e^t is an automorphism of the convolution algebra";
const DERIVATION: &str = "multiplication by t is a derivation of the convolution algebra";
const RADIUS: f64 = 16.0;

fn rel(a: &GaussPolyFn, b: &GaussPolyFn) -> f64 {
    relative(a.sub(b).sup_norm(), a.sup_norm(), b.sup_norm())
}

fn sampled(f: &GaussPolyFn, step: f64) -> Result<GridFn> {
    let count = (2.0 * RADIUS / step).round() as usize + 1;
    GridFn::from_real_fn(-RADIUS, step, count, |t| f.eval(t))
}

fn grid_vs_exact(f: &GaussPolyFn, g: &GaussPolyFn, step: f64) -> Result<f64> {
    let conv = sampled(f, step)?.convolve(&sampled(g, step)?)?;
    let exact = f.convolve(g);
    let err = (0..conv.len()).map(|i| (conv.samples()[i].re - exact.eval(conv.t_at(i))).abs()).fold(0.0, f64::max);
    Ok(err / exact.sup_norm().max(f64::MIN_POSITIVE))
}

fn fft_vs_direct(f: &GaussPolyFn, g: &GaussPolyFn, step: f64) -> Result<f64> {
    let (a, b) = (sampled(f, step)?, sampled(g, step)?);
    let fft = a.convolve_with(&b, ConvolutionMethod::Fft)?;
    let direct = a.convolve_with(&b, ConvolutionMethod::Direct)?;
    Ok(relative(fft.sub(&direct)?.sup_norm(), fft.sup_norm(), direct.sup_norm()))
}

pub fn run(ctx: &Context) -> std::io::Result<SuiteOutput> {
    let cfg = ctx.config;
    let tol = cfg.tolerances.equality;
    let step = cfg.grid.t_step;
    let mut rng = seeded(cfg.seed);
    let draws: Vec<[GaussPolyFn; 3]> =
        (0..cfg.trials).map(|_| [gauss_poly(&mut rng), gauss_poly(&mut rng), gauss_poly(&mut rng)]).collect();
    let max = |f: &dyn Fn(&[GaussPolyFn; 3]) -> f64| draws.iter().map(f).fold(0.0, f64::max);

    let mut checks = vec![
        record("convolution commutes", RING, Comparison::AtMost, tol, Ok(max(&|[f, g, _]| rel(&f.convolve(g), &g.convolve(f))))),
        record(
            "convolution is associative",
            RING,
            Comparison::AtMost,
            tol,
            Ok(max(&|[f, g, h]| rel(&f.convolve(g).convolve(h), &f.convolve(&g.convolve(h))))),
        ),
        record(
            "e^{0.7t} multiplies through convolution",
            AUTOMORPHISM,
            Comparison::AtMost,
            tol,
            Ok(max(&|[f, g, _]| rel(&f.convolve(g).mul_by_exp(0.7), &f.mul_by_exp(0.7).convolve(&g.mul_by_exp(0.7))))),
        ),
        record(
            "t satisfies the Leibniz rule",
            DERIVATION,
            Comparison::AtMost,
            tol,
            Ok(max(&|[f, g, _]| rel(&f.convolve(g).mul_by_t(), &f.mul_by_t().convolve(g).add(&f.convolve(&g.mul_by_t()))))),
        ),
    ];
    let sample_pairs = &draws[..draws.len().min(5)];
    let worst = |f: &dyn Fn(&GaussPolyFn, &GaussPolyFn) -> Result<f64>| {
        sample_pairs.iter().try_fold(0.0f64, |acc, [f1, g1, _]| Ok(acc.max(f(f1, g1)?)))
    };
    checks.push(record(
        "sampled convolution matches the closed form",
        "plumbing",
        Comparison::AtMost,
        cfg.tolerances.quadrature,
        worst(&|f, g| grid_vs_exact(f, g, step)),
    ));
    checks.push(record(
        "FFT and direct convolution agree",
        "plumbing",
        Comparison::AtMost,
        tol,
        worst(&|f, g| fft_vs_direct(f, g, step)),
    ));

    if let Some([f, g, _]) = draws.first() {
        ctx.dump("coeff_f.csv", |w| sampled(f, step)?.write_csv(w))?;
        ctx.dump("coeff_g.csv", |w| sampled(g, step)?.write_csv(w))?;
        ctx.dump("coeff_fg.csv", |w| sampled(f, step)?.convolve(&sampled(g, step)?)?.write_csv(w))?;
    }
    Ok(SuiteOutput { checks, data: json!({ "t_step": step, "window": [-RADIUS, RADIUS] }) })
}
