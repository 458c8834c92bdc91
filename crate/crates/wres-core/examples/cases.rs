use wres_core::boundary_engine::*;
use wres_core::operator_library::Family;

fn main() {
    for fam in [Family::Dirac, Family::Signature] {
        for r in evaluate_all(fam).unwrap() {
            println!("{} {}: {}\n   expected {}  match={}", fam, r.case.id, r.value, r.expected, r.matches);
        }
        println!("psi {}", psi_total(fam).unwrap());
    }
}
