"""Example: walk the workbench API from fixture to certificate.

Verifies the published C3 x C3 embedding, lists its seeds, extends it to
C3 x C5, fetches a certificate for C5 x C7 and asks for the exact matching
book thickness of K4. Read-only: run it as often as you like.

Run: python example_session.py
(requires the API on localhost:8000, e.g. `python -m app.cli serve`)
"""

import sys

import httpx

BASE = "http://localhost:8000/api/v1"


def main(client: httpx.Client | None = None) -> int:
    client = client or httpx.Client(base_url=BASE, timeout=120)

    # 1. Fixtures
    print("=== Fixtures ===")
    r = client.get("/fixtures")
    for item in r.json():
        print(f"  {item['name']} ({item['kind']}, h={item['h']}, s={item['s']})")

    # 2. Verify the published embedding
    print("\n=== Verify: lemma1-c3c3 ===")
    embedding = client.get("/fixtures/lemma1-c3c3").json()
    r = client.post("/embeddings/verify", json=embedding)
    summary = r.json()
    print(f"  valid={summary['valid']} k={summary['k']} delta={summary['delta']} "
          f"({summary['classification']})")
    if not summary["valid"]:
        return 1

    # 3. Seeds
    print("\n=== Seeds ===")
    r = client.post("/embeddings/seeds", json=embedding)
    print(f"  blocks: {r.json()['blocks']}")
    print(f"  seeds: {r.json()['seeds']}")

    # 4. Seed replication C3 x C3 -> C3 x C5
    print("\n=== Extend by r=2 ===")
    r = client.post("/embeddings/extend", params={"r": 2}, json=embedding)
    if r.status_code != 200:
        print(f"  Error: {r.status_code} {r.json().get('message')}")
        return 1
    extended = r.json()
    print(f"  H x C_{extended['s']}: {extended['embedding']['graph']['n']} vertices, "
          f"seed {extended['sidecar']['seed']}, phase {extended['sidecar']['phase']}")
    r = client.post("/embeddings/verify", json=extended["embedding"])
    print(f"  re-verified: valid={r.json()['valid']}")

    # 5. Certificate
    print("\n=== Certificate: C5 x C7 ===")
    r = client.get("/certificates/5/7")
    certificate = r.json()
    print(f"  {certificate['graph']['n']} vertices on {len(certificate['pages'])} pages")

    # 6. Exact thickness of a tiny graph
    print("\n=== mbt(K4) ===")
    k4 = {"n": 4, "edges": [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]]}
    r = client.post("/search/mbt", json=k4)
    print(f"  mbt={r.json()['mbt']} lower bound={r.json()['lower_bound']}")

    print("\nDone! Open http://localhost:8000/docs for Swagger UI")
    return 0


if __name__ == "__main__":
    sys.exit(main())
