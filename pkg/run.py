#!/usr/bin/env python3
"""
TIM-TIN GDoF Lab - 간섭 채널 GDoF 계산기

사용법:
    python run.py <명령> ...     # CLI (eval, sc, oracle, tin, tim, decompose, timeshare)
    python run.py --serve        # 웹 서버 실행
"""

import sys


def run_web():
    """웹 서버 실행"""
    print("=" * 50, file=sys.stderr)
    print("TIM-TIN GDoF Lab", file=sys.stderr)
    print("브라우저 / API 클라이언트에서 http://127.0.0.1:7860 접속", file=sys.stderr)
    print("=" * 50, file=sys.stderr)

    from src.app import main
    main()


def main() -> int:
    if sys.argv[1:2] == ["--serve"]:
        run_web()
        return 0

    from src.cli import run
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
