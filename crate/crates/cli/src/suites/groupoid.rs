use super::{record, Context, SuiteOutput};
use crate::config::GridConfig;
use crate::report::{CheckRecord, Comparison};
use foliation_core::coeff_ring::GridFn;
use foliation_core::flow::FlowModel;
use foliation_core::groupoid::{GroupoidKernel, TGrid, XGrid};
use foliation_core::jet::JetAlgebra;
use foliation_core::random::seeded;
use foliation_core::Result;
use rand::Rng;
use serde_json::json;

const STAR: &str = "convolution and the adjoint make the smooth kernels a *-algebra";
const NORM: &str = "the L1 norms of the groupoid are submultiplicative";
const TAYLOR: &str = "the Taylor map at x = 0 transfers the convolution product to the jet product";

/// Kernels `(1 + c·x·t)` times a Gaussian bump.
fn axiom_kernel(flow: FlowModel, grid: &GridConfig, scale: f64, x0: f64, t0: f64, c: f64) -> Result<GroupoidKernel> {
    let x = XGrid::symmetric(grid.x_radius, grid.x_step * scale)?;
    let t = TGrid::symmetric(grid.t_radius, grid.t_step * scale)?;
    GroupoidKernel::from_real_fn(flow, x, t, |x, t| {
        let (dx, dt) = (x - x0, t - t0);
        (1.0 + c * x * t) * (-dx * dx / 0.5 - dt * dt / 0.08).exp()
    })
}

struct Axioms {
    assoc: f64,
    anti: f64,
    involution: f64,
}

fn axioms(flow: FlowModel, grid: &GridConfig, scale: f64) -> Result<(Axioms, [GroupoidKernel; 3])> {
    let f = axiom_kernel(flow, grid, scale, 0.3, 0.1, 0.5)?;
    let g = axiom_kernel(flow, grid, scale, -0.2, -0.2, -0.3)?;
    let h = axiom_kernel(flow, grid, scale, 0.1, 0.25, 0.2)?;
    let fg = f.convolve(&g)?;
    let assoc = fg.convolve(&h)?.rel_diff(&f.convolve(&g.convolve(&h)?)?)?;
    let anti = fg.adjoint()?.rel_diff(&g.adjoint()?.convolve(&f.adjoint()?)?)?;
    let involution = f.adjoint()?.adjoint()?.rel_diff(&f)?;
    Ok((Axioms { assoc, anti, involution }, [f, g, fg]))
}

struct TaylorKernel {
    x0: f64,
    sx: f64,
    c0: f64,
    c1: f64,
    tau: f64,
}

impl TaylorKernel {
    fn draw<R: Rng>(rng: &mut R) -> Self {
        let sx = rng.gen_range(0.8..1.2);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        TaylorKernel {
            x0: sign * sx * rng.gen_range(0.4..0.8),
            sx,
            c0: rng.gen_range(0.5..1.0),
            c1: rng.gen_range(-1.0..1.0),
            tau: rng.gen_range(-0.2..0.2),
        }
    }

    fn sample(&self, flow: FlowModel, grid: &GridConfig, scale: f64) -> Result<GroupoidKernel> {
        let x = XGrid::symmetric(grid.x_radius.max(10.0), grid.x_step * scale)?;
        let t = TGrid::symmetric(1.6, grid.t_step * scale)?;
        GroupoidKernel::from_real_fn(flow, x, t, |x, t| {
            let (dx, dt) = (x - self.x0, t - self.tau);
            (self.c0 + self.c1 * t) * (-dx * dx / (2.0 * self.sx * self.sx) - dt * dt / 0.08).exp()
        })
    }
}

fn taylor_mismatch(flow: FlowModel, grid: &GridConfig, p: usize, scale: f64, pair: &(TaylorKernel, TaylorKernel)) -> Result<f64> {
    let alg = JetAlgebra::new(flow, p);
    let f = pair.0.sample(flow, grid, scale)?;
    let g = pair.1.sample(flow, grid, scale)?;
    let lhs = f.convolve_restricted(&g, -0.3, 0.3)?.taylor_map(p)?;
    let rhs = alg.jet_mul(&f.taylor_map(p)?, &g.taylor_map(p)?)?;
    (0..=p).try_fold(0.0f64, |acc, q| {
        let (a, b): (&GridFn, &GridFn) = (lhs.coeff(q), rhs.coeff(q));
        Ok(acc.max(super::relative(a.sub(b)?.sup_norm(), a.sup_norm(), b.sup_norm())))
    })
}

pub fn run(ctx: &Context) -> std::io::Result<SuiteOutput> {
    let cfg = ctx.config;
    let grid = &cfg.grid;
    let qtol = cfg.tolerances.quadrature;
    let mut checks = vec![];
    let mut data = vec![];
    for &k in &cfg.k_values {
        let flow = FlowModel::rescaled(k).expect("k validated");
        let name = |s: &str| format!("k={k}: {s}");
        match (axioms(flow, grid, 1.0), axioms(flow, grid, 2.0)) {
            (Ok((fine, [f, g, fg])), Ok((coarse, _))) => {
                checks.push(CheckRecord::at_most(&name("associativity"), STAR, fine.assoc, qtol));
                checks.push(CheckRecord::at_most(&name("(f*g)^* = g^* * f^*"), STAR, fine.anti, qtol));
                checks.push(CheckRecord::at_most(&name("f^** = f"), STAR, fine.involution, qtol));
                let ratio = (coarse.assoc / fine.assoc).min(coarse.anti / fine.anti);
                checks.push(
                    CheckRecord::at_least(&name("defect ratio between steps 2h and h"), "plumbing", ratio, 4.0)
                        .with_note("second-order convergence or better"),
                );
                let norms = |n: fn(&GroupoidKernel) -> Result<f64>| -> Result<f64> { Ok(n(&fg)? / (n(&f)? * n(&g)?)) };
                checks.push(record(&name("|f*g|_I / (|f|_I |g|_I)"), NORM, Comparison::AtMost, 1.0 + qtol, norms(GroupoidKernel::l1_groupoid_norm)));
                checks.push(record(&name("beta-weighted norm ratio"), NORM, Comparison::AtMost, 1.0 + qtol, norms(GroupoidKernel::l1_as_norm)));
                ctx.dump(&format!("kernel_f_k{k}.bin"), |w| f.write_binary(w))?;
                ctx.dump(&format!("kernel_fg_k{k}.csv"), |w| fg.write_csv(w))?;
                data.push(json!({ "k": k, "associativity": [coarse.assoc, fine.assoc], "anti_multiplicativity": [coarse.anti, fine.anti] }));
            }
            (Err(e), _) | (_, Err(e)) => {
                checks.push(CheckRecord::errored(&name("*-algebra axioms"), STAR, Comparison::AtMost, qtol, e));
            }
        }

        let p = cfg.max_jet_order.min(3);
        let mut rng = seeded(cfg.seed.wrapping_add(100 + k as u64));
        let pairs: Vec<_> = (0..cfg.trials.min(3)).map(|_| (TaylorKernel::draw(&mut rng), TaylorKernel::draw(&mut rng))).collect();
        let worst = |scale: f64| pairs.iter().try_fold(0.0f64, |acc, pair| Ok::<f64, foliation_core::Error>(acc.max(taylor_mismatch(flow, grid, p, scale, pair)?)));
        let (at_h, at_half) = (worst(1.0), worst(0.5));
        let improvement = match (&at_h, &at_half) {
            (Ok(a), Ok(b)) => Ok(a / b),
            (Err(e), _) | (_, Err(e)) => Err(foliation_core::Error::InvalidArgument(e.to_string())),
        };
        checks.push(record(&name(&format!("Taylor map homomorphism at order {p}")), TAYLOR, Comparison::AtMost, cfg.tolerances.taylor_fit, at_h));
        checks.push(record(&name("Taylor mismatch improvement from h to h/2"), "plumbing", Comparison::AtLeast, 4.0, improvement));
    }
    Ok(SuiteOutput { checks, data: json!({ "per_k": data }) })
}
