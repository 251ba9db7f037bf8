"""
Batch runner for the simplicity certificates and the adjoined-root check.
Writes per-case certificate tables (CSV), proof transcripts and a markdown summary to test-results/.
"""

import json
import os
import sys

# Ensure project root is on sys.path so we can import utils.*
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from utils.certifier import adjoined_root_check, certificates_frame, simplicity_certificate, transcript


def ensure_dir(path: str) -> None:
    if not os.path.exists(path):
        os.makedirs(path, exist_ok=True)


def run_case(case_name: str, p: int, e: int, r_max: int, out_dir: str) -> dict:
    """
    Certify one (p, e, r_max) case and write its outputs.
    """
    print(f"Running case: {case_name}")
    certificates = simplicity_certificate(p, e, r_max)
    adjoined = adjoined_root_check(p)

    case_dir = os.path.join(out_dir, case_name)
    ensure_dir(case_dir)

    frame = certificates_frame(certificates)
    csv_path = os.path.join(case_dir, "certificates.csv")
    frame.to_csv(csv_path, index=False)

    transcript_path = os.path.join(case_dir, "transcript.md")
    with open(transcript_path, "w") as f:
        for c in certificates:
            f.write(f"## r = {c.r}\n\n```\n{transcript(c)}\n```\n\n")

    print(f"  Wrote: {csv_path}")
    print(f"  Wrote: {transcript_path}")
    return {
        "case": case_name,
        "p": p,
        "e": e,
        "r_max": r_max,
        "verdicts": [bool(c.verdict) for c in certificates],
        "adjoined_root": adjoined.passed,
    }


def write_markdown(summary: list, path: str) -> None:
    lines = [
        "# Certificate summary",
        "",
        "| case | p | e | r_max | all verdicts | adjoined root fixed | status |",
        "|---|---|---|---|---|---|---|",
    ]
    for row in summary:
        if row["status"] != "ok":
            lines.append(f"| {row['case']} | | | | | | error: {row['error']} |")
            continue
        lines.append(
            f"| {row['case']} | {row['p']} | {row['e']} | {row['r_max']} | "
            f"{all(row['verdicts'])} | {row['adjoined_root']} | ok |"
        )
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def main() -> None:
    out_dir = os.path.join(os.getcwd(), "test-results")
    ensure_dir(out_dir)

    # degrees grow like q^(2r); these stay at desk scale
    param_grid = [
        {"name": "p2_e1", "p": 2, "e": 1, "r_max": 4},
        {"name": "p3_e1", "p": 3, "e": 1, "r_max": 4},
        {"name": "p2_e2", "p": 2, "e": 2, "r_max": 3},
        {"name": "p5_e1", "p": 5, "e": 1, "r_max": 3},
    ]

    summary = []
    errors_path = os.path.join(out_dir, "errors.log")
    with open(errors_path, "w") as err_log:
        for params in param_grid:
            case_name = params["name"]
            try:
                row = run_case(case_name, params["p"], params["e"], params["r_max"], out_dir)
                row["status"] = "ok"
                summary.append(row)
            except Exception as e:
                import traceback
                tb = traceback.format_exc()
                err_msg = f"Case {case_name} failed: {e}\n{tb}\n"
                print("  ERROR:", err_msg.strip())
                err_log.write(err_msg)
                summary.append({"case": case_name, "status": "error", "error": str(e)})

    with open(os.path.join(out_dir, "certificates_summary.json"), "w") as f:
        json.dump(summary, f, indent=2)
    write_markdown(summary, os.path.join(out_dir, "certificates_summary.md"))

    print("Done. Summary written to test-results/certificates_summary.md")
    print(f"Any errors were recorded in: {errors_path}")


if __name__ == "__main__":
    main()
