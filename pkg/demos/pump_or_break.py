#!/usr/bin/env python3
"""Walk the canonical fixtures through the analysis pipeline.

Shows, for each fixture: the visible glues, whether a nice U-turn exists,
what the stake-path algorithm concludes, and the certificate that an
independent verifier accepts.
"""

from tilepump import certify, engine
from tilepump.instances import FIXTURE_NAMES, load_fixture
from tilepump.pumping import decide_pumping
from tilepump.visibility import visibility_report


def describe(name):
    tas, path = load_fixture(name)
    print(f"\n=== {name} ({len(tas.tileset)} tile types, |P| = {len(path)}) ===")

    report = visibility_report(path, tas.seed)
    print(f"visible glues: {len(report.west_visible)} from the west, "
          f"{len(report.east_visible)} from the east")

    triple = engine.detect_nice_uturn(tas, path)
    print(f"nice U-turn: {triple if triple else 'none'}")

    final = engine.conclude(tas, path)
    outcome = final.outcome
    print(f"conclusion: {type(outcome).__name__}"
          + (f" ({outcome.reason})" if isinstance(outcome, engine.Inconclusive) else ""))

    if isinstance(outcome, engine.Pumpable):
        cert = outcome.certificate
        print(f"  pump segment ({cert.i}, {cert.j}), horizon {cert.verified_horizon}")
        print(f"  independent verifier says: {certify.verify_pumpable(tas, path, cert)}")
    elif isinstance(outcome, engine.Fragile):
        cert = outcome.certificate
        print(f"  blocking growth of {len(cert.growth_order)} tiles, "
              f"conflict at {cert.conflict_point}")
        print(f"  independent verifier says: {certify.verify_fragile(tas, path, cert)}")


def hook_s_closeup():
    print("\n=== HOOK-S close-up: the descending pump hits the seed ===")
    tas, path = load_fixture("HOOK-S")
    got = decide_pumping(tas, path, 3, 4)
    print(f"decide_pumping(P, 3, 4) = {got}")
    print("growing the seed's own tile one period back blocks the path:")
    out, _, _ = engine.run_algorithm(tas, path, 3, 4)
    for pos, tile in out.certificate.growth_order:
        print(f"  attach {tile} at {pos}")
    print(f"  → conflict at {out.certificate.conflict_point}")


if __name__ == "__main__":
    for name in FIXTURE_NAMES:
        describe(name)
    hook_s_closeup()
