# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Standard command for one stored resource.

The command looks the resource up, then, depending on ``state`` and on whether
it was found, deletes, updates or creates it. With ``--check`` it only reports
whether anything would change.
"""

from abc import ABC, abstractmethod
from typing import Optional

from comdb.shell import command


class StandardCommand(command.Command, ABC):
    """Present/absent command for a model resource."""

    @abstractmethod
    def _get_resource(self) -> Optional[dict]:
        """Look up the resource named by the parameters.

        Returns:
            Optional[dict]: Normalized resource, or None if it does not exist.
        """

    @abstractmethod
    def _validate_deletion(self, resource: dict):
        """Raise when the resource cannot be deleted, also in check mode."""

    @abstractmethod
    def _perform_deletion(self, resource: dict):
        """Delete the resource.

        Args:
            resource (dict): A normalized resource.
        """

    @abstractmethod
    def _get_update_requests(self, resource: dict) -> dict:
        """Changes the parameters ask for, empty when the resource already matches.

        Args:
            resource (dict): A normalized resource.
        """

    @abstractmethod
    def _perform_update(self, requests: dict, resource: dict) -> dict:
        """Apply ``requests`` and return the normalized resource."""

    @abstractmethod
    def _validate_creation_params(self):
        """Raise UsageError when the parameters cannot create the resource."""

    @abstractmethod
    def _perform_creation(self) -> dict:
        """Create the resource and return it normalized."""

    def _result(self, changed: bool, resource: Optional[dict] = None) -> str:
        record = {"changed": changed}
        if resource:
            record.update(resource)
        return self._render_records([record])

    def _delete_resource(self, resource: Optional[dict]) -> str:
        if not resource:
            return self._result(False)
        self._validate_deletion(resource)
        if self.params["check"]:
            return self._result(True)
        self._perform_deletion(resource)
        return self._result(True)

    def _update_resource(self, resource: dict) -> str:
        requests = self._get_update_requests(resource)
        if self.params["check"] or not requests:
            return self._result(bool(requests), resource)
        return self._result(True, self._perform_update(requests, resource))

    def _create_resource(self) -> str:
        self._validate_creation_params()
        if self.params["check"]:
            return self._result(True)
        return self._result(True, self._perform_creation())

    def run(self) -> str:
        resource = self._get_resource()
        if self.params["state"] == "absent":
            return self._delete_resource(resource)
        if resource:
            return self._update_resource(resource)
        return self._create_resource()
