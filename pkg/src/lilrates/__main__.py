from __future__ import annotations

from lilrates.entrypoint import main

main()
