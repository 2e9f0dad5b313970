"""
SPDX-FileCopyrightText: 2024 Contributors to the rkhs-kl project

See the NOTICE file(s) distributed with this work for additional
information regarding copyright ownership.

This program and the accompanying materials are made available under the
terms of the Apache License Version 2.0 which is available at

    http://www.apache.org/licenses/LICENSE-2.0

SPDX-License-Identifier: Apache-2.0
"""

from dataclasses import dataclass, field
from enum import IntEnum


class KCode(IntEnum):
    """
    Status codes shared by every error raised from the library.
    """

    OK = 0
    UNKNOWN = 2
    INVALID_ARGUMENT = 3
    FAILED_PRECONDITION = 9
    OUT_OF_RANGE = 11
    INTERNAL = 13
    DATA_LOSS = 15


@dataclass(frozen=True)
class KStatus:
    code: KCode = field(default=KCode.OK)
    message: str = field(default="")

    def is_ok(self) -> bool:
        return self.code == KCode.OK

    def __str__(self):
        return f"KStatus(code={self.code.name}, message='{self.message}')"
