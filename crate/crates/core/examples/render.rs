//! Draw the Moulton plane with its unital; writes moulton.svg.

use planelab::render::{render_svg, RenderSpec};

fn main() {
    let mut spec = RenderSpec::new("moulton:k=2".parse().unwrap(), (-4.0, 4.0, -4.0, 4.0));
    spec.overlay = Some("pi".into());
    spec.out = Some("moulton.svg".into());
    let svg = render_svg(&spec).unwrap();
    println!("wrote moulton.svg ({} bytes)", svg.len());
}
