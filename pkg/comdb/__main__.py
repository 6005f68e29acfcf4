# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
import sys

from comdb.shell.cli import main

sys.exit(main())
