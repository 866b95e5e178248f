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

"""Byte-reproducible result documents.

Floats become decimal strings with 12 significant digits, '-0' is folded
into '0', keys are sorted and the text ends with a newline.
"""

import csv
import io
import json
import math

import numpy as np

PRECISION = 12


def format_float(value):
    if math.isnan(value):
        return 'nan'
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    text = '%.*g' % (PRECISION, value)
    if text == '-0':
        return '0'
    return text


def quantize(obj):
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): quantize(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [quantize(v) for v in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [quantize(v) for v in obj]
    return obj


def document(config, traces, result, verdict=None, warnings=()):
    doc = {
        'config': config,
        'traces': traces,
        'result': result,
        'warnings': list(warnings),
    }
    if verdict is not None:
        doc['verdict'] = verdict
    return doc


def dumps_json(doc):
    return json.dumps(quantize(doc), sort_keys=True, indent=2,
                      ensure_ascii=False) + '\n'


def dumps_csv(header, rows):
    """One row per radius; floats formatted like the JSON documents."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow(['' if v is None else quantize(v) for v in row])
    return buffer.getvalue()


def error_document(error):
    messages = getattr(error, 'errors', None) or [str(error)]
    return {'error': {'type': error.__class__.__name__,
                      'messages': list(messages)}}
