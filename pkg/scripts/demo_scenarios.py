#!/usr/bin/env python3
"""Walk the headline service scenarios against the shipped sample vocabulary
and print what each surface returns: deprecation resolution, URI minting,
the legacy concordance, tier denial, and a Turtle dereference.

    python scripts/demo_scenarios.py
"""

import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent

from classmarks import rdf, resolver  # noqa: E402
from classmarks.service import Application, HttpRequest, ServiceConfig  # noqa: E402
from classmarks.store import DatasetTier  # noqa: E402
from classmarks.service import load_snapshot_dir  # noqa: E402

BASE = "https://udcdata.info"


def main() -> int:
    snapshot = load_snapshot_dir(REPO / "sample")
    config = ServiceConfig(base_uri=BASE, keys={"demo-key": DatasetTier.FULL})
    app = Application(config, snapshot)

    def get(target, **headers):
        return app.handle(HttpRequest.from_target("GET", target, headers))

    print("== interpret 681.3(035) at full tier ==")
    report = resolver.interpret("681.3(035)", DatasetTier.FULL, snapshot, BASE)
    for c in report.components:
        line = f"  {c.notation:<10} {c.kind:<12} {c.status}"
        if c.replaced_by:
            line += " -> " + ", ".join(u.rendered for u in c.replaced_by)
        print(line)
    print(f"  composed: {report.composed_uri.rendered}")

    print("\n== minted URIs ==")
    for notation in ("=162.3", "004", "592/599", '"19"'):
        print(f"  {notation:<10} {resolver.mint_uri(notation, snapshot, BASE).rendered}")

    print("\n== legacy identifier 068288 ==")
    response = get("/068288")
    print(f"  {response.status} -> {dict(response.headers)['Location']}")

    print("\n== keyless dereference of a licensed record ==")
    response = get("/MRF93/621.039")
    print("  " + json.dumps(json.loads(response.body)))

    print("\n== Turtle for =162.3 ==")
    record = snapshot.get("=162.3", DatasetTier.SUMMARY)
    print(rdf.serialize_turtle(rdf.concept_to_graph(record, snapshot, BASE)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
