# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""In-memory concept-oriented database engine.

Packages:

    model      nested ordered sets, two-level schema, flattening, navigation, propagation
    coql       query language front end and evaluator
    storage    text formats and CSV snowflake ingest
    shell      command-line shell

"""

from ._version import _VERSION

__version__ = _VERSION
