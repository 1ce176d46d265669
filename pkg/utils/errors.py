"""
例外クラス
ライブラリ全体で共有するエラー階層
"""


class NaedError(Exception):
    """naedsimの基底例外"""


class ValidationError(NaedError, ValueError):
    """引数・行列・長さなどの検証エラー"""


class CapacityError(NaedError):
    """レジスタやオラクルの次元が上限を超えた場合のエラー"""


class ParseError(NaedError):
    """DSL/回路テキストの構文エラー（行・列の位置情報付き）"""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        location = ''
        if line is not None:
            location = f' (line {line}' + (f', column {column}' if column is not None else '') + ')'
        super().__init__(f'{message}{location}')


class ConfigError(NaedError):
    """実験設定のエラー（満たせないグリッドセルなど）"""

    def __init__(self, message, cells=None):
        self.cells = list(cells or [])
        super().__init__(message)


class VerificationError(NaedError):
    """検証チェックが許容誤差を超えた場合のエラー"""
