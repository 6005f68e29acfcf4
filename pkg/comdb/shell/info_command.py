# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Read-only listing command.

Classes:
    InfoCommand

"""

from abc import ABC, abstractmethod
from typing import List, Optional

from comdb import errors
from comdb.shell import command


class InfoCommand(command.Command, ABC):
    """Base class for commands that list normalized resources."""

    @abstractmethod
    def _filter(self, resource: dict) -> bool:
        """Check if the resource matches the command's filter options.

        Args:

            resource (dict): Normalized resource.

        Returns:

            bool: True if the resource should be listed.
        """

    @abstractmethod
    def _resource_uniquely_identifiable(self) -> bool:
        """True if the parameters name exactly one resource."""

    @abstractmethod
    def _get_single_resource(self) -> Optional[dict]:
        """The named resource, or None if it does not exist."""

    @abstractmethod
    def _get_resource_list(self) -> List[dict]:
        """Every resource of this kind, in canonical order."""

    def run(self) -> str:
        """List the matching resources.

        Raises:
            UsageError: A uniquely named resource does not exist.
        """
        if self._resource_uniquely_identifiable():
            resource = self._get_single_resource()
            if not resource:
                raise errors.UsageError(f"{self.name}: no such resource")
            resources = [resource]
        else:
            resources = self._get_resource_list()
        return self._render_records([r for r in resources if self._filter(r)])
