"""
Scenario files
==============

A scenario fixes the instance, the seminorm and the states; running it gives a
report that can be written as JSON or CSV. The same file drives the command
line tool: ``statemetric report demos/torus.toml``.
"""
from pathlib import Path

from statemetric import run_scenario

here = Path(__file__).parent
report = run_scenario(here / "torus.toml")
print(report.to_csv())
print("suite passed:", report.data["suite"]["passed"])
for v in report.data["suite"]["verdicts"]:
    print(f"  {v['name']:<20} {'ok' if v['passed'] else 'FAILED'}")
