//! File-format round trips and rejection of corrupted field maps.

use skewmst::harmonics::field_spectrum;
use skewmst::io::{
    read_field_csv, read_slot_path_csv, read_spectrum_csv, spectrum_rows, write_field_csv,
    write_slot_path_csv, write_spectrum_csv, SpectrumRow, SPECTRUM_HEADER,
};
use skewmst::mst::SlotPathField;
use skewmst::synth::synthesize;
use skewmst::{Error, FieldComponent, FieldHarmonic, MachineGeometry};

#[path = "support/mutations.rs"]
mod mutations;

use mutations::{join, mutations};

const GOLDEN: &str = include_str!("data/golden_field.csv");

fn lines() -> Vec<String> {
    mutations::lines(GOLDEN)
}

fn geom() -> MachineGeometry {
    MachineGeometry {
        pole_count: 8,
        slot_count: 48,
        airgap_radius: 0.05,
        rotor_radius: 0.0495,
        axial_length: 0.1,
        rotor_diameter: 0.099,
        slot_bottom_radius: 0.07,
    }
}

#[test]
fn golden_file_parses() {
    let map = read_field_csv(GOLDEN.as_bytes()).unwrap();
    assert_eq!((map.slice_count(), map.time_samples(), map.angle_samples()), (1, 4, 8));
    assert!(!map.bz_absent());
    assert_eq!(format!("{:.16e}", map.br()[[0, 0, 0]]), "9.5000000000000007e-1");
}

#[test]
fn every_mutation_is_rejected_with_a_line_number() {
    let muts = mutations(GOLDEN);
    assert!(muts.len() >= 20);
    for (name, text) in muts {
        match read_field_csv(text.as_bytes()) {
            Ok(_) => panic!("mutation `{name}` parsed silently"),
            Err(Error::Parse { line, message }) => {
                assert!(!message.is_empty(), "{name}");
                assert!(line >= 1, "{name}: no line in `{message}`");
            }
            Err(other) => panic!("mutation `{name}` gave non-parse error {other}"),
        }
    }
}

#[test]
fn gap_names_the_missing_index() {
    let mut l = lines();
    l.remove(32);
    let err = read_field_csv(join(&l).as_bytes()).unwrap_err().to_string();
    assert!(err.contains("(slice=0, itime=3, itheta=7)"), "{err}");
}

#[test]
fn duplicate_names_both_lines() {
    let mut l = lines();
    l.insert(6, l[5].clone());
    let err = read_field_csv(join(&l).as_bytes()).unwrap_err().to_string();
    assert!(err.contains("line 7") && err.contains("line 6"), "{err}");
}

#[test]
fn missing_bz_column_is_zero_filled_and_flagged() {
    let text: Vec<String> = lines()
        .iter()
        .map(|l| l.rsplit_once(',').unwrap().0.to_string())
        .collect();
    let map = read_field_csv(join(&text).as_bytes()).unwrap();
    assert!(map.bz_absent());
    assert!(map.bz().iter().all(|&v| v == 0.0));
}

#[test]
fn field_map_round_trip_is_value_identical() {
    let map = read_field_csv(GOLDEN.as_bytes()).unwrap();
    let mut buf = Vec::new();
    let n = write_field_csv(&map, &mut buf).unwrap();
    assert_eq!(n, buf.len());
    assert_eq!(String::from_utf8(buf.clone()).unwrap(), GOLDEN);
    let back = read_field_csv(buf.as_slice()).unwrap();
    assert_eq!(back.br(), map.br());
    assert_eq!(back.btheta(), map.btheta());
    assert_eq!(back.bz(), map.bz());

    let h = [
        FieldHarmonic::new(FieldComponent::Radial, 4, 1, 0.9, 0.123456789),
        FieldHarmonic::new(FieldComponent::Tangential, 20, 3, 1.0 / 3.0, -2.0),
        FieldHarmonic::new(FieldComponent::Axial, 8, 2, 1e-7, 0.5),
    ];
    let synth = synthesize(&h, (8, 64), 3, &geom()).unwrap();
    let mut buf = Vec::new();
    write_field_csv(&synth, &mut buf).unwrap();
    let back = read_field_csv(buf.as_slice()).unwrap();
    assert_eq!(back.br(), synth.br());
    assert_eq!(back.btheta(), synth.btheta());
    assert_eq!(back.bz(), synth.bz());
    assert_eq!(back.slice_count(), 3);
}

#[test]
fn spectrum_round_trip_is_value_identical() {
    let map = read_field_csv(GOLDEN.as_bytes()).unwrap();
    let rows = spectrum_rows(&field_spectrum(&map, 0, FieldComponent::Radial));
    let mut buf = Vec::new();
    write_spectrum_csv(&rows, &mut buf).unwrap();
    assert_eq!(read_spectrum_csv(buf.as_slice()).unwrap(), rows);
}

#[test]
fn empty_spectrum_is_header_only() {
    let mut buf = Vec::new();
    let rows: Vec<SpectrumRow> = Vec::new();
    write_spectrum_csv(&rows, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), format!("{SPECTRUM_HEADER}\n"));
}

#[test]
fn slot_path_round_trip() {
    let br = ndarray::Array4::from_shape_fn((2, 4, 3, 2), |(s, t, b, r)| {
        ((s * 24 + t * 6 + b * 2 + r) as f64 * 0.1).sin()
    });
    let paths = SlotPathField::new(br.clone(), br.mapv(|v| v * 0.5), br.mapv(|v| -v)).unwrap();
    let mut buf = Vec::new();
    write_slot_path_csv(&paths, &mut buf).unwrap();
    assert_eq!(read_slot_path_csv(buf.as_slice()).unwrap(), paths);
}
