"""
SPDX-FileCopyrightText: 2024 Contributors to the rkhs-kl project

See the NOTICE file(s) distributed with this work for additional
information regarding copyright ownership.

This program and the accompanying materials are made available under the
terms of the Apache License Version 2.0 which is available at

    http://www.apache.org/licenses/LICENSE-2.0

SPDX-License-Identifier: Apache-2.0
"""

from abc import ABC, abstractmethod

from rkhskl.status.kcode import KCode, KStatus
from rkhskl.status.kstatuserror import KStatusError


class ValidationResult(ABC):
    """
    Class wrapping a ValidationResult of success or failure wrapping the value
    of a KStatus.
    """

    STATUS_SUCCESS = KStatus(code=KCode.OK, message="OK")

    @abstractmethod
    def to_status(self) -> KStatus:
        pass

    @abstractmethod
    def is_success(self) -> bool:
        pass

    def is_failure(self) -> bool:
        return not self.is_success()

    @abstractmethod
    def get_message(self) -> str:
        pass

    def raise_if_failure(self) -> None:
        """
        Convert a failed validation into a KStatusError carrying INVALID_ARGUMENT.
        """
        if self.is_failure():
            raise KStatusError(self.to_status())

    @staticmethod
    def success():
        return Success()

    @staticmethod
    def failure(message):
        return Failure(message)

    @staticmethod
    def combine(results) -> "ValidationResult":
        """
        Join the messages of every failed result with ",", or succeed when none failed.
        """
        messages = [result.get_message() for result in results if result.is_failure()]
        if messages:
            return ValidationResult.failure(",".join(messages))
        return ValidationResult.success()


class Failure(ValidationResult):
    """
    Implementation for failure, wrapping the message.
    """

    def __init__(self, message):
        self.message = message if message else "Validation Failed."

    def to_status(self) -> KStatus:
        return KStatus(code=KCode.INVALID_ARGUMENT, message=self.message)

    def is_success(self) -> bool:
        return False

    def get_message(self) -> str:
        return self.message

    def __str__(self):
        return f"ValidationResult.Failure(message='{self.message}')"


class Success(ValidationResult):
    """
    Implementation for success, wrapping a KStatus with KCode.OK.
    """

    def to_status(self) -> KStatus:
        return ValidationResult.STATUS_SUCCESS

    def is_success(self) -> bool:
        return True

    def get_message(self) -> str:
        return ""

    def __str__(self):
        return "ValidationResult.Success()"

    def __eq__(self, other):
        if isinstance(other, Success):
            return self.to_status() == other.to_status()
        return False

    def __hash__(self):
        return hash(self.to_status())
