//! Print the SP and WL identifiers every context node receives from one
//! anchor of a small motif.

use rolewalk::graph::generate::triangle_contrast_motif;
use rolewalk::role::role_context;
use rolewalk::Variant;

fn main() -> rolewalk::Result<()> {
    let (g, [a, b, d]) = triangle_contrast_motif();
    for variant in [Variant::Sp, Variant::Wl] {
        let ctx = role_context(&g, a, 4, variant)?;
        println!("{variant} tokens seen from anchor {}:", g.name(a));
        for (v, dist) in ctx.bfs.iter().filter(|&(v, _)| v != a) {
            println!("  {} (distance {dist}) -> {}", g.name(v), ctx.psi[&v].render(&g));
        }
    }
    let sp = role_context(&g, a, 4, Variant::Sp)?;
    let wl = role_context(&g, a, 4, Variant::Wl)?;
    println!(
        "{} and {}: same SP token: {}, same WL token: {}",
        g.name(b),
        g.name(d),
        sp.emit(b) == sp.emit(d),
        wl.emit(b) == wl.emit(d)
    );
    Ok(())
}
