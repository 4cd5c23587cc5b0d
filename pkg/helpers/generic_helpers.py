#!/usr/bin/env python3

###########################################################################
#
#  Copyright 2026 The bandwidth-verifier Authors
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
#
###########################################################################

"""Module to load generic helper functions"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor

import models

THREADS_ENV = "BANDWIDTH_VERIFIER_THREADS"


def max_workers() -> int:
  """Worker pool size, capped by BANDWIDTH_VERIFIER_THREADS when set."""
  default = os.cpu_count() or 1
  raw = os.environ.get(THREADS_ENV)
  if not raw:
    return default
  try:
    cap = int(raw)
  except ValueError:
    logging.warning("Ignoring %s=%r, not an integer.", THREADS_ENV, raw)
    return default
  return max(1, min(cap, default))


def execute_tasks_in_parallel(tasks: list[any], on_task_complete=None) -> list:
  """Executes a list of tasks in parallel

  Results are returned in task order whatever the completion order.

  Args:
    tasks: List of callables to execute
    on_task_complete: Optional callback(result) called when each task
                      completes, in task order
  """
  results = []
  with ThreadPoolExecutor(max_workers=max_workers()) as executor:
    running_tasks = [executor.submit(task) for task in tasks]
    for running_task in running_tasks:
      result = running_task.result()
      results.append(result)
      if on_task_complete:
        on_task_complete(result)
  return results


def _mark(margin: float, tol: float) -> str:
  if margin > tol:
    return "✅"
  if margin >= -tol:
    return "⚠"
  return "❌"


def print_certificate(title: str, margins: dict, verdict: models.Verdict,
                      tol: float) -> None:
  """Print the margins of a certificate"""
  print(f"***** {title} ***** \n")
  for name, margin in margins.items():
    print(f" * {_mark(margin, tol)} {name}: {margin:.6g}")
  if verdict in (
      models.Verdict.THEOREM_VIOLATED,
      models.Verdict.HYPOTHESIS_VIOLATED,
  ):
    print(f"\nVerdict: ❌ {verdict.value} \n")
  elif verdict == models.Verdict.TIGHT:
    print(f"\nVerdict: ⚠ {verdict.value} \n")
  else:
    print(f"\nVerdict: ✅ {verdict.value} \n")
