use super::{Context, SuiteOutput};
use crate::report::CheckRecord;
use foliation_core::flow::{FlowModel, FlowVariant};
use foliation_core::wiener_hopf::{bi_index_report, flow_bi_index};
use serde_json::json;

const PARITY: &str = "the crossed products for k and l are isomorphic iff k and l have the same parity";
const BI_INDEX: &str = "odd k gives equal bi-index components, even k mixed components";

pub fn run(ctx: &Context) -> std::io::Result<SuiteOutput> {
    let mut checks = vec![];
    let mut reports = vec![];
    for &k in &ctx.config.k_values {
        let mono = FlowModel::monomial(k).expect("k validated");
        let resc = mono.with_variant(FlowVariant::CompleteRescaled);
        let r = bi_index_report(&mono);
        let expected = 2.0 * (k % 2) as f64;
        checks.push(CheckRecord::equals(&format!("k={k}: |e1 + e2|"), PARITY, r.parity_invariant.abs() as f64, expected));
        let equal = (r.epsilon[0] == r.epsilon[1]) as u8 as f64;
        checks.push(CheckRecord::equals(&format!("k={k}: components equal"), BI_INDEX, equal, (k % 2) as f64));
        let same = (flow_bi_index(&resc) == flow_bi_index(&mono)) as u8 as f64;
        checks.push(CheckRecord::equals(&format!("k={k}: invariant under the rescaled variant"), "plumbing", same, 1.0));
        let rev = flow_bi_index(&mono.reversed()).epsilon;
        let negated = (rev == [-r.epsilon[0], -r.epsilon[1]]) as u8 as f64;
        checks.push(CheckRecord::equals(&format!("k={k}: time reversal negates"), BI_INDEX, negated, 1.0));
        reports.push(r);
        reports.push(bi_index_report(&resc));
    }
    Ok(SuiteOutput { checks, data: json!({ "bi_index": reports }) })
}
