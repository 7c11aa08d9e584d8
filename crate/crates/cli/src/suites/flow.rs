use super::{record, Context, SuiteOutput};
use crate::report::Comparison;
use foliation_core::flow::{check_cocycle_identity, check_composition_identity, FlowModel, FlowTaylorTable};
use foliation_core::random::seeded;
use rand::Rng;
use serde_json::json;

const COCYCLE: &str = "the Taylor coefficients of the flow satisfy the cocycle identity";
const COMPOSITION: &str = "Taylor coefficients of a composition are products of coefficient matrices";
const GROUP_LAW: &str = "the rescaled field is complete and its flow is a one-parameter group";
const AGREEMENT: &str = "the rescaled field agrees with x^k d/dx to the order that determines the jets";

fn table_size(order: usize) -> usize {
    order.max(6)
}

pub fn run(ctx: &Context) -> std::io::Result<SuiteOutput> {
    let cfg = ctx.config;
    let tol = cfg.tolerances.equality;
    let m_max = table_size(cfg.max_jet_order);
    let mut checks = vec![];
    let mut data = vec![];
    for &k in &cfg.k_values {
        let mut rng = seeded(cfg.seed.wrapping_add(k as u64));
        let mono = FlowModel::monomial(k).expect("k validated");
        let resc = FlowModel::rescaled(k).expect("k validated");
        let tables = [FlowTaylorTable::new(mono, m_max), FlowTaylorTable::new(resc, m_max)];
        let mut cocycle = 0.0f64;
        for _ in 0..cfg.trials {
            let (t, s) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            for table in &tables {
                for m in 0..=m_max {
                    for n in 0..=m {
                        cocycle = cocycle.max(check_cocycle_identity(table, n, m, t, s));
                    }
                }
            }
        }
        checks.push(record(&format!("k={k}: cocycle identity"), COCYCLE, Comparison::AtMost, tol, Ok(cocycle)));

        let mut composition = 0.0f64;
        for m in 0..=m_max {
            for n in 0..=m {
                composition = composition.max(check_composition_identity(k, n, m, cfg.trials, &mut rng));
            }
        }
        checks.push(record(&format!("k={k}: composition identity"), COMPOSITION, Comparison::AtMost, tol, Ok(composition)));

        let mut group = Ok(0.0f64);
        for _ in 0..cfg.trials {
            let (x, t, s) = (rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            group = group.and_then(|acc| {
                let lhs = resc.flow_eval(t + s, x)?;
                let rhs = resc.flow_eval(t, resc.flow_eval(s, x)?)?;
                Ok(acc.max((lhs - rhs).abs() / x.abs().max(1.0)))
            });
        }
        checks.push(record(&format!("k={k}: rescaled group law"), GROUP_LAW, Comparison::AtMost, cfg.tolerances.quadrature, group));

        let mut agree = 0.0f64;
        for n in 0..=m_max {
            for m in n..=(n + k as usize).min(m_max) {
                let (a, b) = (tables[0].get(n, m), tables[1].get(n, m));
                for t in [-1.0, -0.3, 0.5, 1.0] {
                    agree = agree.max((a.eval(t) - b.eval(t)).abs());
                }
            }
        }
        checks.push(record(&format!("k={k}: monomial and rescaled tables agree for m-n <= k"), AGREEMENT, Comparison::AtMost, tol, Ok(agree)));

        ctx.dump(&format!("taylor_table_k{k}.json"), |w| Ok(serde_json::to_writer_pretty(w, &tables[0])?))?;
        data.push(json!({ "k": k, "cocycle": cocycle, "composition": composition }));
    }
    Ok(SuiteOutput { checks, data: json!({ "m_max": m_max, "per_k": data }) })
}
