use super::{record, Context, SuiteOutput};
use crate::report::{CheckRecord, Comparison};
use foliation_core::wiener_hopf::{direct_norms, nonpreservation_demo, Diffeo, LineFunction, NonPreservationSetup};
use serde_json::json;

const NOT_PRESERVED: &str = "the Wiener-Hopf algebra is not preserved by a diffeomorphism with u' unbounded";
const ESTIMATE: &str = "the pulled-back term vanishes because |eta_n|_inf tends to 0";

pub fn run(ctx: &Context) -> std::io::Result<SuiteOutput> {
    let cfg = ctx.config;
    let mut checks = vec![];
    let mut data = serde_json::Map::new();

    let setup = NonPreservationSetup::default();
    match nonpreservation_demo(&setup) {
        Ok(r) => {
            let a = r.a;
            let n0 = r.rows.iter().position(|row| row.pulled_back_sup < a / 10.0);
            checks.push(
                CheckRecord::equals("u' is unbounded", "plumbing", r.derivative_unbounded as u8 as f64, 1.0),
            );
            match n0 {
                Some(n0) => {
                    let min_norm = r.rows[n0..].iter().map(|row| row.norm).fold(f64::INFINITY, f64::min);
                    checks.push(
                        CheckRecord::at_least("norms after n0 stay above a/2", NOT_PRESERVED, min_norm, a / 2.0)
                            .with_note(format!("n0 = {n0}, first n with pulled-back sup below a/10")),
                    );
                }
                None => checks.push(CheckRecord::at_most(
                    "pulled-back sup falls below a/10",
                    ESTIMATE,
                    r.rows.last().map_or(f64::NAN, |row| row.pulled_back_sup),
                    a / 10.0,
                )),
            }
            let increases = r.rows[1..].windows(2).filter(|w| w[1].pulled_back_sup >= w[0].pulled_back_sup).count();
            checks.push(CheckRecord::equals("pulled-back sup decays monotonically", ESTIMATE, increases as f64, 0.0));
            let ns = [1, 10, setup.n_max];
            let direct = direct_norms(&setup, &ns).map(|d| {
                ns.iter().zip(d).map(|(&n, d)| (r.rows[n].norm - d).abs()).fold(0.0, f64::max)
            });
            checks.push(record("expanded norms match direct quadrature", "plumbing", Comparison::AtMost, cfg.tolerances.quadrature, direct));
            ctx.dump("nonpreservation.csv", |w| {
                w.extend_from_slice(b"n,norm,translation_term,pulled_back_l2,pulled_back_sup\n");
                for row in &r.rows {
                    w.extend_from_slice(
                        format!("{},{:e},{:e},{:e},{:e}\n", row.n, row.norm, row.translation_term, row.pulled_back_l2, row.pulled_back_sup)
                            .as_bytes(),
                    );
                }
                Ok(())
            })?;
            data.insert("growing".into(), json!({ "setup": setup, "report": r }));
        }
        Err(e) => checks.push(CheckRecord::errored("growing u", NOT_PRESERVED, Comparison::AtLeast, 0.0, e)),
    }

    let zero = NonPreservationSetup { f2: LineFunction::Zero, n_max: 20, ..Default::default() };
    let r = nonpreservation_demo(&zero);
    let spread = r.as_ref().map(|r| r.rows.iter().map(|row| (row.norm - r.a).abs()).fold(0.0, f64::max));
    checks.push(record("f2 = 0: norms equal a", NOT_PRESERVED, Comparison::AtMost, cfg.tolerances.equality, spread.map_err(clone_err)));
    if let Ok(r) = r {
        data.insert("f2_zero".into(), json!({ "setup": zero, "report": r }));
    }

    let identity = NonPreservationSetup { u: Diffeo::identity(), n_max: 20, ..Default::default() };
    let ns: Vec<usize> = (0..=identity.n_max).collect();
    let r = nonpreservation_demo(&identity);
    let agreement = r.as_ref().map_err(clone_err).and_then(|r| {
        let direct = direct_norms(&identity, &ns)?;
        Ok(r.rows.iter().zip(direct).map(|(row, d)| (row.norm - d).abs()).fold(0.0, f64::max))
    });
    checks.push(record("u = id, f1 = f2: norms match direct quadrature", "plumbing", Comparison::AtMost, cfg.tolerances.quadrature, agreement));
    if let Ok(r) = r {
        data.insert("identity".into(), json!({ "setup": identity, "report": r }));
    }

    Ok(SuiteOutput { checks, data: data.into() })
}

fn clone_err(e: &foliation_core::Error) -> foliation_core::Error {
    foliation_core::Error::InvalidArgument(e.to_string())
}
