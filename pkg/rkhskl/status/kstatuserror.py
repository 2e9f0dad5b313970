"""
SPDX-FileCopyrightText: 2024 Contributors to the rkhs-kl project

See the NOTICE file(s) distributed with this work for additional
information regarding copyright ownership.

This program and the accompanying materials are made available under the
terms of the Apache License Version 2.0 which is available at

    http://www.apache.org/licenses/LICENSE-2.0

SPDX-License-Identifier: Apache-2.0
"""

from typing import Optional

from rkhskl.status.kcode import KCode, KStatus


class KStatusError(Exception):
    def __init__(self, status: Optional[KStatus], cause: Optional[Exception] = None):
        message = ""
        if status is not None:
            message = status.message
        super().__init__(message, cause)
        self.status = status if status is not None else KStatus(code=KCode.UNKNOWN)
        self.cause = cause

    @classmethod
    def from_code_message(cls, code: KCode, message: str, cause: Optional[Exception] = None):
        return cls(KStatus(code=code, message=message), cause)

    def get_status(self) -> KStatus:
        return self.status

    def get_code(self) -> KCode:
        return self.status.code

    def get_message(self) -> str:
        return self.status.message

    def get_cause(self) -> Optional[Exception]:
        return self.cause

    def __str__(self):
        return f"[{self.get_code().name}] {self.get_message()}"
