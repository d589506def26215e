use std::path::PathBuf;

use mecip::network::{parse_bif, read_bif, to_bif_string};

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("networks").join(format!("{name}.bif"))
}

#[test]
fn asia_shape() {
    let net = read_bif(path("asia")).unwrap();
    assert_eq!(net.n_nodes(), 8);
    assert_eq!(net.n_edges(), 8);
    assert!(net.var_index("either").is_some());
}

#[test]
fn sachs_shape() {
    let net = read_bif(path("sachs")).unwrap();
    assert_eq!(net.n_nodes(), 11);
    assert_eq!(net.n_edges(), 17);
    assert_eq!(net.max_in_degree(), 3);
}

#[test]
fn every_bundled_network_round_trips() {
    for name in ["asia", "sachs", "child", "insurance", "alarm", "water", "barley", "win95pts"] {
        let net = read_bif(path(name)).unwrap();
        let back = parse_bif(&to_bif_string(&net, Some("round trip")).unwrap()).unwrap();
        assert_eq!(back.names(), net.names(), "{name}");
        for v in 0..net.n_nodes() {
            assert_eq!(back.parents(v), net.parents(v));
            for (a, b) in back.cpt(v).iter().zip(net.cpt(v)) {
                assert!((a - b).abs() <= 1e-9, "{name}");
            }
        }
    }
}
