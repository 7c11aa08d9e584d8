use super::{record, relative, Context, SuiteOutput};
use crate::report::Comparison;
use foliation_core::flow::FlowModel;
use foliation_core::jet::{commutativity_report, random_jet, JetAlgebra};
use foliation_core::random::seeded;
use serde_json::json;

const COMMUTATIVE: &str = "the jet algebra of order p is commutative for p < k";
const NONCOMMUTATIVE: &str = "the jet algebra is noncommutative from order k on";
const RELATION: &str = "x f = f x + delta(f) x^k for k >= 2 and x f = Delta(f) x for k = 1";
const ASSOCIATIVE: &str = "the jet product is associative";
/// Commutators of the unit-norm witness pair are of order one.
const WITNESS_FLOOR: f64 = 1e-3;

pub fn run(ctx: &Context) -> std::io::Result<SuiteOutput> {
    let cfg = ctx.config;
    let tol = cfg.tolerances.equality;
    let order = cfg.max_jet_order;
    let mut checks = vec![];
    let mut tables = vec![];
    let mut csv = String::from("k,order,max_commutator_norm\n");
    for &k in &cfg.k_values {
        let model = FlowModel::monomial(k).expect("k validated");
        let mut rng = seeded(cfg.seed.wrapping_add(k as u64));
        let rows = match commutativity_report(model, order, cfg.trials, &mut rng) {
            Ok(rows) => rows,
            Err(e) => {
                checks.push(super::record(&format!("k={k}: commutativity table"), COMMUTATIVE, Comparison::AtMost, tol, Err(e)));
                continue;
            }
        };
        for row in &rows {
            csv.push_str(&format!("{k},{},{:e}\n", row.order, row.max_norm));
            let name = format!("k={k}: commutator norm at order {}", row.order);
            checks.push(if row.order < k as usize {
                record(&name, COMMUTATIVE, Comparison::AtMost, tol, Ok(row.max_norm))
            } else {
                record(&name, NONCOMMUTATIVE, Comparison::AtLeast, WITNESS_FLOOR, Ok(row.max_norm))
            });
        }
        tables.push(json!({ "k": k, "rows": rows }));

        let alg = JetAlgebra::new(model, order.max(k as usize));
        let mut defect = 0.0f64;
        for _ in 0..cfg.trials {
            let f = random_jet(k, k as usize, &mut rng);
            match alg.relation_defect(&f) {
                Ok(d) => defect = defect.max(d / f.sup_norm().max(1.0)),
                Err(_) => defect = f64::NAN,
            }
        }
        checks.push(record(&format!("k={k}: x-multiplication relation at order k"), RELATION, Comparison::AtMost, tol, Ok(defect)));

        let mut assoc = 0.0f64;
        for _ in 0..cfg.trials {
            let [f, g, h] = [(); 3].map(|_| random_jet(k, order, &mut rng));
            let lhs = alg.jet_mul(&alg.jet_mul(&f, &g).expect("same shape"), &h).expect("same shape");
            let rhs = alg.jet_mul(&f, &alg.jet_mul(&g, &h).expect("same shape")).expect("same shape");
            for q in 0..=order {
                let (a, b) = (lhs.coeff(q), rhs.coeff(q));
                assoc = assoc.max(relative(a.sub(b).sup_norm(), a.sup_norm(), b.sup_norm()));
            }
        }
        checks.push(record(&format!("k={k}: associativity"), ASSOCIATIVE, Comparison::AtMost, tol, Ok(assoc)));
    }
    ctx.dump("commutativity.csv", |w| {
        w.extend_from_slice(csv.as_bytes());
        Ok(())
    })?;
    Ok(SuiteOutput { checks, data: json!({ "commutativity": tables }) })
}
