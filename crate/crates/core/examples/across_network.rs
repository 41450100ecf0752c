//! Hub detection transferred between two differently sized graphs: train
//! on one graph's labels, predict the other's. The hubs have degrees 6 and
//! 5, which share a log2 degree bin, so their identifiers coincide.

use rolewalk::eval::{across_network_eval, AcrossParams};
use rolewalk::graph::generate::planted_roles;
use rolewalk::pipeline::RunConfig;
use rolewalk::{GraphLabels, NodeId, Variant};

fn hub_vs_rest(labels: &GraphLabels) -> rolewalk::Result<GraphLabels> {
    let classes = (0..labels.node_count())
        .map(|v| labels.class(v as NodeId).map(|c| u32::from(labels.class_names()[c as usize] != "hub")))
        .collect();
    GraphLabels::new(classes, vec!["hub".into(), "other".into()])
}

fn main() -> rolewalk::Result<()> {
    let (ga, la) = planted_roles(5, 8, 2, 1)?;
    let (gb, lb) = planted_roles(4, 12, 2, 2)?;
    let (la, lb) = (hub_vs_rest(&la)?, hub_vs_rest(&lb)?);
    let params = AcrossParams {
        repeats: 3,
        ..AcrossParams::default()
    };
    for variant in [Variant::Sp, Variant::Wl, Variant::Plain] {
        let cfg = RunConfig {
            variant,
            ..RunConfig::default()
        };
        let r = across_network_eval(&ga, &la, &gb, &lb, &cfg, &params)?;
        println!(
            "{variant:>5}: macro-F1 {:.3}  (majority {:.3})",
            r.macro_f1(),
            r.majority_macro_f1()
        );
    }
    Ok(())
}
