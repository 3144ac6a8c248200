class BoxlabError(Exception):
    """Базовое исключение библиотеки."""


class ValidationError(BoxlabError, ValueError):
    pass


class DomainError(ValidationError):
    """Операция применена вне своей области определения."""


class UndefinedProductError(ValidationError):
    pass


class NumericError(BoxlabError, ArithmeticError):
    pass


class BracketError(NumericError):
    pass
