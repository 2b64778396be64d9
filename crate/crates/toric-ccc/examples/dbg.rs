use toric_ccc::fans;
fn main() {
    for (name, fan) in [("p1", fans::p1()), ("p112", fans::p112()), ("gerby", fans::gerby_p1()), ("p2sub", fans::p2_subdivided())] {
        let rep = fan.validate();
        println!("{}: valid={} violations={:?}", name, rep.is_valid(), rep.violations);
    }
}
