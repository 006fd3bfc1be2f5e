use mysticum::octagon::{conic_census, pencil_census, OctScene};
use std::time::Instant;

fn main() {
    let s = OctScene::generate(1);
    let t0 = Instant::now();
    let cc = conic_census(&s).unwrap();
    println!("conic census: {:?} ({} classical, {} two-quad)", t0.elapsed(), cc.classical.len(), cc.two_quad.len());
    let t1 = Instant::now();
    let pc = pencil_census(&s, &cc).unwrap();
    println!("pencil census: {:?}", t1.elapsed());
    println!("compatible triples {} distinct {}", pc.compatible_triples, pc.compatible_distinct_pencils);
    println!("edge-disjoint triples {} distinct {}", pc.edge_disjoint_triples, pc.edge_disjoint_distinct_pencils);
    println!("by bicyclic: {:?}", pc.edge_disjoint_by_bicyclic);
    println!("per-conic compatible histogram: {:?}", pc.per_conic_compatible_histogram());
    println!("per-conic edge-disjoint histogram: {:?}", pc.per_conic_edge_disjoint_histogram());
}
