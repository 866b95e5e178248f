# Copyright 2026 pharmonic contributors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
#     Unless required by applicable law or agreed to in writing, software
#     distributed under the License is distributed on an "AS IS" BASIS,
#     WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#     See the License for the specific language governing permissions and
#     limitations under the License.

"""Discrete nonlinear potential theory on bounded-degree graphs."""

import logging

__version__ = '0.1.0'


def colored_logging():
    # Color codes http://www.tldp.org/HOWTO/Bash-Prompt-HOWTO/x329.html
    for level, color in (
            (logging.DEBUG, 36),      # cyan
            (logging.INFO, 32),       # green
            (logging.WARNING, 33),    # yellow
            (logging.ERROR, 31),      # red
            (logging.CRITICAL, 41),   # red background
    ):
        name = logging.getLevelName(level)
        if name.startswith('\033'):
            # Already colored, main() may run several times in tests
            continue
        logging.addLevelName(level, "\033[%dm%s\033[0m" % (color, name))
