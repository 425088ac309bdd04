# Copyright 2026 The adiatherm Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Adiabatic thermal-state preparation on simulated qubits."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import run_command as _run_command


def run(name, config=None, out_dir=".", **flags):
    """Runs a CLI command with a dict config; returns the resolved config."""
    text = "" if config is None else _json.dumps(config)
    return _json.loads(_run_command(name, text, str(out_dir), **flags))
